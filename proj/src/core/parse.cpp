#include "core/syntax.hpp"

#include <cctype>

// Recursive-descent parsers for the textual grammar (types, terms, formulas)
// and the S-expression proof format. Backtracking is done by saving/restoring
// an index into a fully pre-lexed token vector; the grammar is small enough
// that re-parsing a prefix twice is never a performance concern.

namespace fint {

namespace {

enum class Tok {
  Ident, Num,
  LParen, RParen, Comma, Dot, Colon, Backslash,
  Star, Arrow, Lolli, Amp, OrTok, Bang, Tilde, OPlus,
  EqTok, LeTok, LeqStarTok,
  KwIn, KwBot, KwForall, KwExists,
  Turnstile,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

[[noreturn]] void fail_at(const Token& t, const std::string& msg) {
  throw FintError(ErrorKind::Syntax, msg + " at line " + std::to_string(t.line) + ", column " +
                                         std::to_string(t.col),
                  t.line, t.col);
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string s) { out.push_back({k, std::move(s), line, col}); };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') { ++i; ++line; col = 1; continue; }
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; ++col; continue; }
    if (c == ';') { // comment to end of line (used in proof files)
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    int startCol = col;
    auto emit = [&](Tok k, std::size_t len) {
      out.push_back({k, text.substr(i, len), line, startCol});
      i += len;
      col += static_cast<int>(len);
    };
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      emit(Tok::Num, j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' || text[j] == '\''))
        ++j;
      std::string w = text.substr(i, j - i);
      Tok k = Tok::Ident;
      if (w == "in") k = Tok::KwIn;
      else if (w == "bot") k = Tok::KwBot;
      else if (w == "forall") k = Tok::KwForall;
      else if (w == "exists") k = Tok::KwExists;
      emit(k, j - i);
      continue;
    }
    switch (c) {
      case '(':
        if (i + 2 < text.size() && text[i + 1] == '+' && text[i + 2] == ')') { emit(Tok::OPlus, 3); continue; }
        emit(Tok::LParen, 1); continue;
      case ')': emit(Tok::RParen, 1); continue;
      case ',': emit(Tok::Comma, 1); continue;
      case '.': emit(Tok::Dot, 1); continue;
      case ':': emit(Tok::Colon, 1); continue;
      case '~': emit(Tok::Tilde, 1); continue;
      case '*': emit(Tok::Star, 1); continue;
      case '&': emit(Tok::Amp, 1); continue;
      case '!': emit(Tok::Bang, 1); continue;
      case '=': emit(Tok::EqTok, 1); continue;
      case '\\':
        if (i + 1 < text.size() && text[i + 1] == '/') { emit(Tok::OrTok, 2); continue; }
        emit(Tok::Backslash, 1); continue;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') { emit(Tok::Arrow, 2); continue; }
        if (i + 1 < text.size() && text[i + 1] == 'o') { emit(Tok::Lolli, 2); continue; }
        break;
      case '<':
        if (i + 2 < text.size() && text[i + 1] == '=' && text[i + 2] == '*') { emit(Tok::LeqStarTok, 3); continue; }
        if (i + 1 < text.size() && text[i + 1] == '=') { emit(Tok::LeTok, 2); continue; }
        break;
      case '|':
        if (i + 1 < text.size() && text[i + 1] == '-') { emit(Tok::Turnstile, 2); continue; }
        break;
      default: break;
    }
    Token bad{Tok::End, std::string(1, c), line, startCol};
    fail_at(bad, "unexpected character '" + std::string(1, c) + "'");
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

struct Parser {
  std::vector<Token> toks;
  std::size_t pos = 0;
  Dialect dialect = Dialect::AL;

  const Token& peek() const { return toks[pos]; }
  const Token& get() { return toks[pos < toks.size() - 1 ? pos++ : pos]; }
  bool at(Tok k) const { return toks[pos].kind == k; }
  bool eat(Tok k) {
    if (at(k)) { ++pos; return true; }
    return false;
  }
  Token expect(Tok k, const char* what) {
    if (!at(k)) fail_at(peek(), std::string("expected ") + what);
    return get();
  }

  // ---- types ----
  TypePtr type_atom() {
    if (eat(Tok::LParen)) {
      TypePtr t = type_full();
      expect(Tok::RParen, "')'");
      return apply_stars(t);
    }
    if (at(Tok::Ident)) {
      if (peek().text == "N") { get(); return apply_stars(ty_nat()); }
      if (peek().text == "B") { get(); return apply_stars(ty_bool()); }
    }
    fail_at(peek(), "expected a type");
  }
  TypePtr apply_stars(TypePtr t) {
    while (eat(Tok::Star)) t = ty_star(t);
    return t;
  }
  TypePtr type_full() {
    TypePtr l = type_atom();
    if (eat(Tok::Arrow)) return ty_arrow(l, type_full());
    return l;
  }

  bool looks_like_type() const {
    return at(Tok::LParen) || (at(Tok::Ident) && (peek().text == "N" || peek().text == "B"));
  }

  // ---- terms ----
  TermPtr term_atom() {
    if (at(Tok::Num)) {
      int n = std::stoi(get().text);
      return t_numeral(n);
    }
    if (at(Tok::Ident)) {
      std::string w = get().text;
      if (auto c = const_by_name(w)) return t_const(*c);
      if (w == "N" || w == "B") fail_at(toks[pos - 1], "type name used as a term");
      return t_var(w);
    }
    if (eat(Tok::LParen)) {
      TermPtr t = term_full();
      expect(Tok::RParen, "')'");
      return t;
    }
    fail_at(peek(), "expected a term");
  }
  bool starts_term_atom() const {
    if (at(Tok::Num) || at(Tok::LParen)) return true;
    if (at(Tok::Ident)) return peek().text != "N" && peek().text != "B";
    return false;
  }
  TermPtr term_full() {
    if (eat(Tok::Backslash)) {
      std::string v = expect(Tok::Ident, "variable").text;
      TypePtr ty = nullptr;
      if (eat(Tok::Colon)) ty = type_full();
      expect(Tok::Dot, "'.'");
      return t_lam(v, ty, term_full());
    }
    TermPtr head = term_atom();
    while (starts_term_atom()) head = t_app(head, term_atom());
    return head;
  }

  // ---- formulas ----
  // impl level (loosest, also handles leading quantifiers)
  FormulaPtr formula_full() {
    if (at(Tok::KwForall) || at(Tok::KwExists)) return quantified();
    FormulaPtr l = or_level();
    if (at(Tok::Arrow) || at(Tok::Lolli)) {
      Token op = get();
      if (op.kind == Tok::Arrow && dialect == Dialect::AL)
        fail_at(op, "'->' is intuitionistic syntax; use '-o'");
      if (op.kind == Tok::Lolli && dialect == Dialect::IL)
        fail_at(op, "'-o' is linear syntax; use '->'");
      return f_impl(l, formula_full());
    }
    return l;
  }
  FormulaPtr or_level() {
    FormulaPtr l = and_level();
    for (;;) {
      if (at(Tok::OrTok)) {
        Token op = get();
        if (dialect == Dialect::AL) fail_at(op, "'\\/' is intuitionistic syntax");
        l = f_or(l, and_level());
      } else if (at(Tok::OPlus)) {
        Token op = get();
        if (dialect == Dialect::IL) fail_at(op, "'(+)' is linear syntax");
        l = f_oplus(l, and_level());
      } else {
        return l;
      }
    }
  }
  FormulaPtr and_level() {
    FormulaPtr l = bang_level();
    for (;;) {
      if (at(Tok::Amp)) {
        get();
        // in IL '&' is plain conjunction; in AL it is the additive conjunction
        l = dialect == Dialect::IL ? f_conj(l, bang_level()) : f_with(l, bang_level());
      } else if (at(Tok::Star)) {
        Token op = get();
        if (dialect == Dialect::IL) fail_at(op, "'*' is linear syntax; use '&'");
        l = f_conj(l, bang_level());
      } else {
        return l;
      }
    }
  }
  FormulaPtr bang_level() {
    if (at(Tok::Bang)) {
      Token op = get();
      if (dialect == Dialect::IL) fail_at(op, "'!' is linear syntax");
      return f_bang(bang_level());
    }
    return atom_level();
  }

  FormulaPtr quantified() {
    bool isForall = get().kind == Tok::KwForall;
    bool monotone = eat(Tok::Tilde);
    if (monotone && !isForall) fail_at(toks[pos - 1], "'~' only modifies forall");
    // binder list
    std::vector<std::string> vars;
    std::vector<TypePtr> types; // null entries = unannotated
    for (;;) {
      std::string v = expect(Tok::Ident, "bound variable").text;
      TypePtr ty = nullptr;
      if (eat(Tok::Colon)) ty = type_full();
      vars.push_back(v);
      types.push_back(ty);
      if (!eat(Tok::Comma)) break;
    }
    BqGuard guard = BqGuard::None;
    std::vector<TermPtr> bounds;
    if (at(Tok::KwIn) || at(Tok::LeqStarTok)) {
      guard = get().kind == Tok::KwIn ? BqGuard::Elem : BqGuard::LeqStar;
      if (eat(Tok::LParen)) {
        bounds.push_back(term_full());
        while (eat(Tok::Comma)) bounds.push_back(term_full());
        expect(Tok::RParen, "')'");
        if (bounds.size() == 1) {
          // single parenthesized bound: fine, same thing
        }
      } else {
        bounds.push_back(term_atom());
        while (starts_term_atom()) bounds.back() = t_app(bounds.back(), term_atom());
      }
    }
    expect(Tok::Dot, "'.'");
    FormulaPtr body = formula_full();
    if (guard == BqGuard::None && !monotone) {
      // ordinary (possibly nested) quantifier
      for (std::size_t i = vars.size(); i-- > 0;)
        body = isForall ? f_forall(vars[i], types[i], body) : f_exists(vars[i], types[i], body);
      return body;
    }
    if (!isForall) fail_at(peek(), "bounded quantifier is universal");
    for (const auto& ty : types)
      if (!ty) fail_at(peek(), "bounded quantifier binders need type annotations");
    if (guard != BqGuard::None && bounds.size() != vars.size())
      fail_at(peek(), "bound tuple arity does not match binder count");
    return f_bq(vars, types, bounds, guard, monotone, body);
  }

  FormulaPtr atom_level() {
    if (eat(Tok::KwBot)) return f_bottom(dialect);
    // try: term followed by an infix relation
    std::size_t save = pos;
    try {
      TermPtr l = term_full();
      if (at(Tok::EqTok) || at(Tok::LeTok) || at(Tok::LeqStarTok) || at(Tok::KwIn)) {
        Tok rel = get().kind;
        TermPtr r = term_full();
        switch (rel) {
          case Tok::EqTok: return f_eq(dialect, l, r);
          case Tok::LeTok: return f_le(dialect, l, r);
          case Tok::LeqStarTok: return f_leqstar(dialect, l, r);
          default: return f_elem(dialect, l, r);
        }
      }
    } catch (const FintError&) {
      // fall through to the other alternatives
    }
    pos = save;
    if (at(Tok::LParen)) {
      // typing atom with parenthesized type head, e.g. (N -> N)(f)
      try {
        std::size_t mark = pos;
        TypePtr ty = type_atom(); // consumes (T)* forms
        if (at(Tok::LParen)) return typing_tail(ty);
        pos = mark;
      } catch (const FintError&) {
        pos = save;
      }
      expect(Tok::LParen, "'('");
      FormulaPtr f = formula_full();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (at(Tok::Ident)) {
      std::string w = peek().text;
      if (w == "N" || w == "B") {
        TypePtr ty = type_atom(); // handles postfix stars
        return typing_tail(ty);
      }
      get();
      expect(Tok::LParen, "'(' after predicate name");
      std::vector<TermPtr> args;
      if (!at(Tok::RParen)) {
        args.push_back(term_full());
        while (eat(Tok::Comma)) args.push_back(term_full());
      }
      expect(Tok::RParen, "')'");
      PredId p;
      p.kind = PredId::Kind::Named;
      p.name = w;
      return f_atom(dialect, std::move(p), std::move(args));
    }
    fail_at(peek(), "expected a formula");
  }

  FormulaPtr typing_tail(TypePtr ty) {
    expect(Tok::LParen, "'(' after type");
    TermPtr arg = term_full();
    expect(Tok::RParen, "')'");
    return f_typing(dialect, std::move(ty), std::move(arg));
  }
};

} // namespace

TypePtr parse_type(const std::string& text) {
  Parser p{lex(text)};
  TypePtr t = p.type_full();
  if (!p.at(Tok::End)) fail_at(p.peek(), "trailing input after type");
  return t;
}

TermPtr parse_term(const std::string& text) {
  Parser p{lex(text)};
  TermPtr t = p.term_full();
  if (!p.at(Tok::End)) fail_at(p.peek(), "trailing input after term");
  return t;
}

FormulaPtr parse_formula(const std::string& text, Dialect d) {
  Parser p{lex(text)};
  p.dialect = d;
  FormulaPtr f = p.formula_full();
  if (!p.at(Tok::End)) fail_at(p.peek(), "trailing input after formula");
  return rename_apart(f);
}

} // namespace fint
