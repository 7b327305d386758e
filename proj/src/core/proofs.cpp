#include "core/sexpr.hpp"
#include "check/validate.hpp"
#include "extract/axioms.hpp"

#include <cctype>
#include <sstream>

namespace fint {

// ---------------------------------------------------------------------------
// S-expression reader
// ---------------------------------------------------------------------------

namespace {

struct SReader {
  const std::string& text;
  std::size_t i = 0;
  int line = 1, col = 1;

  void bump() {
    if (text[i] == '\n') { ++line; col = 1; } else ++col;
    ++i;
  }
  void skip() {
    for (;;) {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) bump();
      if (i < text.size() && text[i] == ';') {
        while (i < text.size() && text[i] != '\n') bump();
        continue;
      }
      return;
    }
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw FintError(ErrorKind::Syntax, msg + " at line " + std::to_string(line) + ", column " +
                                           std::to_string(col),
                    line, col);
  }
  SNode node() {
    skip();
    if (i >= text.size()) fail("unexpected end of input");
    SNode n;
    n.line = line;
    n.col = col;
    if (text[i] == '(') {
      bump();
      n.isList = true;
      for (;;) {
        skip();
        if (i >= text.size()) fail("unterminated '('");
        if (text[i] == ')') { bump(); break; }
        n.items.push_back(node());
      }
      return n;
    }
    if (text[i] == ')') fail("unexpected ')'");
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
           text[i] != '(' && text[i] != ')' && text[i] != ';')
      bump();
    n.atom = text.substr(start, i - start);
    return n;
  }
};

[[noreturn]] void fail_node(const SNode& n, const std::string& msg) {
  throw FintError(ErrorKind::Syntax, msg + " at line " + std::to_string(n.line) + ", column " +
                                         std::to_string(n.col),
                  n.line, n.col);
}

bool head_is(const SNode& n, const char* w) {
  return n.isList && !n.items.empty() && !n.items[0].isList && n.items[0].atom == w;
}

void need_items(const SNode& n, std::size_t count, const char* what) {
  if (n.items.size() != count) fail_node(n, std::string("expected ") + what);
}

} // namespace

SNode read_sexpr(const std::string& text) {
  SReader r{text};
  SNode n = r.node();
  r.skip();
  if (r.i < text.size()) r.fail("trailing input after S-expression");
  return n;
}

// ---------------------------------------------------------------------------
// S-expression -> AST
// ---------------------------------------------------------------------------

TypePtr snode_type(const SNode& n) {
  if (!n.isList) {
    if (n.atom == "N") return ty_nat();
    if (n.atom == "B") return ty_bool();
    fail_node(n, "expected a type, got '" + n.atom + "'");
  }
  if (head_is(n, "arrow")) {
    need_items(n, 3, "(arrow T T)");
    return ty_arrow(snode_type(n.items[1]), snode_type(n.items[2]));
  }
  if (head_is(n, "star")) {
    need_items(n, 2, "(star T)");
    return ty_star(snode_type(n.items[1]));
  }
  fail_node(n, "expected a type");
}

namespace {
bool snode_is_type(const SNode& n) {
  if (!n.isList) return n.atom == "N" || n.atom == "B";
  return head_is(n, "arrow") || head_is(n, "star");
}
} // namespace

TermPtr snode_term(const SNode& n) {
  if (!n.isList) {
    if (!n.atom.empty() && std::isdigit(static_cast<unsigned char>(n.atom[0]))) {
      for (char c : n.atom)
        if (!std::isdigit(static_cast<unsigned char>(c))) fail_node(n, "bad numeral");
      return t_numeral(std::stoi(n.atom));
    }
    if (auto c = const_by_name(n.atom)) return t_const(*c);
    if (n.atom == "N" || n.atom == "B") fail_node(n, "type name used as a term");
    return t_var(n.atom);
  }
  if (head_is(n, "lam")) {
    need_items(n, 4, "(lam x T body)");
    if (n.items[1].isList) fail_node(n.items[1], "expected a variable");
    TypePtr ty = nullptr;
    if (!(!n.items[2].isList && n.items[2].atom == "_")) ty = snode_type(n.items[2]);
    return t_lam(n.items[1].atom, ty, snode_term(n.items[3]));
  }
  if (n.items.empty()) fail_node(n, "empty term");
  TermPtr out = snode_term(n.items[0]);
  for (std::size_t i = 1; i < n.items.size(); ++i) out = t_app(out, snode_term(n.items[i]));
  return out;
}

FormulaPtr snode_formula(const SNode& n, Dialect d) {
  if (!n.isList) {
    if (n.atom == "bot") return f_bottom(d);
    fail_node(n, "expected a formula");
  }
  if (n.items.empty() || n.items[0].isList) fail_node(n, "expected a formula");
  const std::string& h = n.items[0].atom;
  auto binary = [&](FormulaPtr (*mkf)(FormulaPtr, FormulaPtr)) {
    need_items(n, 3, "two subformulas");
    return mkf(snode_formula(n.items[1], d), snode_formula(n.items[2], d));
  };
  auto binterm = [&](FormulaPtr (*mkf)(Dialect, TermPtr, TermPtr, TypePtr)) {
    need_items(n, 3, "two terms");
    return mkf(d, snode_term(n.items[1]), snode_term(n.items[2]), nullptr);
  };
  if (h == "atom") {
    if (n.items.size() < 2) fail_node(n, "(atom HEAD t...)");
    std::vector<TermPtr> args;
    for (std::size_t i = 2; i < n.items.size(); ++i) args.push_back(snode_term(n.items[i]));
    if (snode_is_type(n.items[1])) {
      if (args.size() != 1) fail_node(n, "typing atom takes exactly one term");
      return f_typing(d, snode_type(n.items[1]), args[0]);
    }
    if (n.items[1].isList) fail_node(n.items[1], "expected a predicate name or type");
    PredId p;
    p.kind = PredId::Kind::Named;
    p.name = n.items[1].atom;
    return f_atom(d, std::move(p), std::move(args));
  }
  if (h == "eq") return binterm(f_eq);
  if (h == "leqstar") return binterm(f_leqstar);
  if (h == "elem") return binterm(f_elem);
  if (h == "le") {
    need_items(n, 3, "two terms");
    return f_le(d, snode_term(n.items[1]), snode_term(n.items[2]));
  }
  if (h == "tensor" || h == "and") {
    if ((h == "tensor") != (d == Dialect::AL)) fail_node(n, "conjunction head does not match dialect");
    return binary(f_conj);
  }
  if (h == "lolli" || h == "implies") {
    if ((h == "lolli") != (d == Dialect::AL)) fail_node(n, "implication head does not match dialect");
    return binary(f_impl);
  }
  if (h == "or") return binary(f_or);
  if (h == "oplus") return binary(f_oplus);
  if (h == "with") return binary(f_with);
  if (h == "bang") {
    need_items(n, 2, "(bang F)");
    return f_bang(snode_formula(n.items[1], d));
  }
  if (h == "forall" || h == "exists") {
    if (n.items.size() != 3 && n.items.size() != 4) fail_node(n, "(forall x [T] F)");
    if (n.items[1].isList) fail_node(n.items[1], "expected a variable");
    TypePtr ty = nullptr;
    const SNode& bodyNode = n.items.back();
    if (n.items.size() == 4 && !(!n.items[2].isList && n.items[2].atom == "_"))
      ty = snode_type(n.items[2]);
    FormulaPtr body = snode_formula(bodyNode, d);
    return h == "forall" ? f_forall(n.items[1].atom, ty, body) : f_exists(n.items[1].atom, ty, body);
  }
  fail_node(n, "unknown formula head '" + h + "'");
}

std::optional<Dialect> snode_formula_dialect(const SNode& n) {
  std::optional<Dialect> seen;
  auto vote = [&](Dialect d, const SNode& at) {
    if (seen && *seen != d) fail_node(at, "formula mixes intuitionistic and linear connectives");
    seen = d;
  };
  struct Walk {
    decltype(vote)& v;
    void go(const SNode& m) {
      if (!m.isList) return;
      if (!m.items.empty() && !m.items[0].isList) {
        const std::string& h = m.items[0].atom;
        if (h == "tensor" || h == "lolli" || h == "bang" || h == "oplus" || h == "with")
          v(Dialect::AL, m);
        if (h == "and" || h == "implies" || h == "or") v(Dialect::IL, m);
      }
      for (const auto& it : m.items) go(it);
    }
  } w{vote};
  w.go(n);
  return seen;
}

// ---------------------------------------------------------------------------
// AST -> S-expression
// ---------------------------------------------------------------------------

std::string sexpr_of_type(const TypePtr& t) {
  switch (t->kind) {
    case FiniteType::Kind::Nat: return "N";
    case FiniteType::Kind::Bool: return "B";
    case FiniteType::Kind::Arrow:
      return "(arrow " + sexpr_of_type(t->dom) + " " + sexpr_of_type(t->cod) + ")";
    case FiniteType::Kind::Star: return "(star " + sexpr_of_type(t->elem) + ")";
  }
  return "?";
}

std::string sexpr_of_term(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var: return t->name;
    case Term::Kind::Const: return const_name(t->tag);
    case Term::Kind::Lambda:
      return "(lam " + t->var + " " + (t->varType ? sexpr_of_type(t->varType) : "_") + " " +
             sexpr_of_term(t->body) + ")";
    case Term::Kind::App: {
      // flatten application spines into one list
      std::vector<const Term*> spine;
      const Term* cur = t.get();
      while (cur->kind == Term::Kind::App) {
        spine.push_back(cur->arg.get());
        cur = cur->fun.get();
      }
      std::string out = "(";
      out += cur->kind == Term::Kind::Var     ? cur->name
             : cur->kind == Term::Kind::Const ? const_name(cur->tag)
                                              : sexpr_of_term(std::make_shared<Term>(*cur));
      for (auto it = spine.rbegin(); it != spine.rend(); ++it)
        out += " " + sexpr_of_term(std::make_shared<Term>(**it));
      return out + ")";
    }
  }
  return "?";
}

std::string sexpr_of_formula(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Atom: {
      switch (f->pred.kind) {
        case PredId::Kind::Named: {
          std::string out = "(atom " + f->pred.name;
          for (const auto& a : f->args) out += " " + sexpr_of_term(a);
          return out + ")";
        }
        case PredId::Kind::Typing:
          return "(atom " + sexpr_of_type(f->pred.type) + " " + sexpr_of_term(f->args[0]) + ")";
        case PredId::Kind::Eq:
          return "(eq " + sexpr_of_term(f->args[0]) + " " + sexpr_of_term(f->args[1]) + ")";
        case PredId::Kind::Le:
          return "(le " + sexpr_of_term(f->args[0]) + " " + sexpr_of_term(f->args[1]) + ")";
        case PredId::Kind::LeqStar:
          return "(leqstar " + sexpr_of_term(f->args[0]) + " " + sexpr_of_term(f->args[1]) + ")";
        case PredId::Kind::Elem:
          return "(elem " + sexpr_of_term(f->args[0]) + " " + sexpr_of_term(f->args[1]) + ")";
      }
      return "?";
    }
    case Formula::Kind::Bottom: return "bot";
    case Formula::Kind::Conj:
      return "(" + std::string(f->dialect == Dialect::AL ? "tensor" : "and") + " " +
             sexpr_of_formula(f->left) + " " + sexpr_of_formula(f->right) + ")";
    case Formula::Kind::Impl:
      return "(" + std::string(f->dialect == Dialect::AL ? "lolli" : "implies") + " " +
             sexpr_of_formula(f->left) + " " + sexpr_of_formula(f->right) + ")";
    case Formula::Kind::Or:
      return "(or " + sexpr_of_formula(f->left) + " " + sexpr_of_formula(f->right) + ")";
    case Formula::Kind::Oplus:
      return "(oplus " + sexpr_of_formula(f->left) + " " + sexpr_of_formula(f->right) + ")";
    case Formula::Kind::With:
      return "(with " + sexpr_of_formula(f->left) + " " + sexpr_of_formula(f->right) + ")";
    case Formula::Kind::Bang: return "(bang " + sexpr_of_formula(f->body) + ")";
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return "(" + std::string(f->kind == Formula::Kind::Forall ? "forall" : "exists") + " " +
             f->var + " " + (f->varType ? sexpr_of_type(f->varType) : "_") + " " +
             sexpr_of_formula(f->body) + ")";
    case Formula::Kind::BQ:
      throw FintError(ErrorKind::Unsupported, "bounded quantifiers have no proof-file syntax");
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Proof parsing
// ---------------------------------------------------------------------------

namespace {

struct RuleSpell {
  const char* name;
  RuleTag tag;
  std::optional<Dialect> forces;
};

const RuleSpell kRules[] = {
    {"id", RuleTag::Id, std::nullopt},
    {"efq", RuleTag::Efq, std::nullopt},
    {"cut", RuleTag::Cut, std::nullopt},
    {"per", RuleTag::Per, std::nullopt},
    {"tensorR", RuleTag::ConjR, Dialect::AL},
    {"tensorL", RuleTag::ConjL, Dialect::AL},
    {"andR", RuleTag::ConjR, Dialect::IL},
    {"andL", RuleTag::ConjL, Dialect::IL},
    {"lolliR", RuleTag::ImplR, Dialect::AL},
    {"lolliL", RuleTag::ImplL, Dialect::AL},
    {"impliesR", RuleTag::ImplR, Dialect::IL},
    {"impliesL", RuleTag::ImplL, Dialect::IL},
    {"forallR", RuleTag::ForallR, std::nullopt},
    {"forallL", RuleTag::ForallL, std::nullopt},
    {"existsR", RuleTag::ExistsR, std::nullopt},
    {"existsL", RuleTag::ExistsL, std::nullopt},
    {"con", RuleTag::Con, std::nullopt},
    {"wkn", RuleTag::Wkn, std::nullopt},
    {"bangR", RuleTag::BangR, Dialect::AL},
    {"bangL", RuleTag::BangL, Dialect::AL},
    {"axiom", RuleTag::Axiom, std::nullopt},
};

const RuleSpell* rule_spell(const std::string& name) {
  for (const auto& r : kRules)
    if (name == r.name) return &r;
  return nullptr;
}

bool snode_is_rule(const SNode& n) {
  return n.isList && !n.items.empty() && !n.items[0].isList && rule_spell(n.items[0].atom) != nullptr;
}

// One walk over the whole tree: rule spellings and connective heads both vote.
void infer_dialect(const SNode& n, std::optional<Dialect>& seen) {
  if (!n.isList) return;
  if (!n.items.empty() && !n.items[0].isList) {
    const std::string& h = n.items[0].atom;
    std::optional<Dialect> vote;
    if (const RuleSpell* r = rule_spell(h); r && r->forces) vote = *r->forces;
    if (h == "tensor" || h == "lolli" || h == "bang" || h == "oplus" || h == "with")
      vote = Dialect::AL;
    if (h == "and" || h == "implies" || h == "or") vote = Dialect::IL;
    if (vote) {
      if (seen && *seen != *vote)
        fail_node(n, "proof mixes intuitionistic and linear syntax");
      seen = *vote;
    }
  }
  for (const auto& it : n.items) infer_dialect(it, seen);
}

ProofPtr build_proof(const SNode& n, Dialect d) {
  if (!n.isList || n.items.empty() || n.items[0].isList)
    fail_node(n, "expected a proof rule (name args...)");
  const RuleSpell* rs = rule_spell(n.items[0].atom);
  if (!rs) fail_node(n.items[0], "unknown rule '" + n.items[0].atom + "'");
  if (rs->forces && *rs->forces != d) fail_node(n, "rule does not match proof dialect");

  auto node = std::make_shared<ProofTree>();
  node->rule = rs->tag;
  node->dialect = d;

  std::vector<const SNode*> payload;
  std::vector<const SNode*> rawPremises;
  for (std::size_t i = 1; i < n.items.size(); ++i) {
    if (snode_is_rule(n.items[i])) rawPremises.push_back(&n.items[i]);
    else payload.push_back(&n.items[i]);
  }
  auto need_payload = [&](std::size_t k, const char* what) {
    if (payload.size() != k) fail_node(n, std::string("rule expects payload: ") + what);
  };
  auto need_premises = [&](std::size_t k) {
    if (rawPremises.size() != k)
      fail_node(n, "rule expects " + std::to_string(k) + " premise(s), got " +
                       std::to_string(rawPremises.size()));
  };

  switch (rs->tag) {
    case RuleTag::Id:
    case RuleTag::Efq:
      need_payload(1, "one formula");
      need_premises(0);
      node->formula = snode_formula(*payload[0], d);
      break;
    case RuleTag::Cut:
      need_payload(0, "none");
      need_premises(2);
      break;
    case RuleTag::Per: {
      need_payload(1, "a context position");
      need_premises(1);
      const SNode& ix = *payload[0];
      if (ix.isList || ix.atom.empty() ||
          !std::isdigit(static_cast<unsigned char>(ix.atom[0])))
        fail_node(ix, "expected a context position");
      node->permIndex = static_cast<std::size_t>(std::stoul(ix.atom));
      break;
    }
    case RuleTag::ConjR:
    case RuleTag::ImplL:
      need_payload(0, "none");
      need_premises(2);
      break;
    case RuleTag::ConjL:
    case RuleTag::ImplR:
    case RuleTag::Con:
    case RuleTag::BangR:
    case RuleTag::BangL:
      need_payload(0, "none");
      need_premises(1);
      break;
    case RuleTag::ForallR:
    case RuleTag::ExistsL: {
      need_premises(1);
      if (payload.size() != 1 && payload.size() != 2)
        fail_node(n, "rule expects an eigenvariable and optionally its type");
      if (payload[0]->isList) fail_node(*payload[0], "expected a variable");
      node->eigenvar = payload[0]->atom;
      if (payload.size() == 2) node->eigenType = snode_type(*payload[1]);
      break;
    }
    case RuleTag::ForallL:
    case RuleTag::ExistsR:
      need_payload(2, "the quantified formula and the witness term");
      need_premises(1);
      node->formula = snode_formula(*payload[0], d);
      node->witness = snode_term(*payload[1]);
      break;
    case RuleTag::Wkn:
      need_payload(1, "the added formula");
      need_premises(1);
      node->formula = snode_formula(*payload[0], d);
      break;
    case RuleTag::Axiom: {
      if (payload.empty() || payload[0]->isList) fail_node(n, "axiom expects a name");
      node->axiomName = payload[0]->atom;
      std::vector<SNode> rest;
      for (std::size_t i = 1; i < payload.size(); ++i) rest.push_back(*payload[i]);
      axiom_fill(*node, rest);
      break;
    }
  }
  for (const SNode* p : rawPremises) node->premises.push_back(build_proof(*p, d));
  return node;
}

} // namespace

ProofPtr parse_proof(const std::string& text) {
  SNode root = read_sexpr(text);
  std::optional<Dialect> d;
  infer_dialect(root, d);
  ProofPtr raw = build_proof(root, d.value_or(Dialect::AL));
  return validate_proof(raw);
}

// ---------------------------------------------------------------------------
// Proof printing (same S-expression syntax parse_proof reads)
// ---------------------------------------------------------------------------

namespace {
void print_proof_rec(std::ostringstream& os, const ProofPtr& p, int indent) {
  os << std::string(indent, ' ') << "(";
  // pick the dialect-matching spelling for the shared tags
  const char* name = nullptr;
  for (const auto& r : kRules) {
    if (r.tag != p->rule) continue;
    if (!r.forces || *r.forces == p->dialect) { name = r.name; break; }
  }
  os << (name ? name : "?");
  switch (p->rule) {
    case RuleTag::Id:
    case RuleTag::Efq:
    case RuleTag::Wkn:
      os << " " << sexpr_of_formula(p->formula);
      break;
    case RuleTag::Per:
      os << " " << p->permIndex;
      break;
    case RuleTag::ForallL:
    case RuleTag::ExistsR:
      os << " " << sexpr_of_formula(p->formula) << " " << sexpr_of_term(p->witness);
      break;
    case RuleTag::ForallR:
    case RuleTag::ExistsL:
      os << " " << p->eigenvar;
      if (p->eigenType) os << " " << sexpr_of_type(p->eigenType);
      break;
    case RuleTag::Axiom:
      os << " " << p->axiomName;
      for (const auto& s : axiom_payload_sexprs(*p)) os << " " << s;
      break;
    default: break;
  }
  if (p->premises.empty()) {
    os << ")";
    return;
  }
  for (const auto& q : p->premises) {
    os << "\n";
    print_proof_rec(os, q, indent + 2);
  }
  os << ")";
}
} // namespace

std::string print_proof(const ProofPtr& p) {
  std::ostringstream os;
  print_proof_rec(os, p, 0);
  return os.str();
}

} // namespace fint
