#include "core/syntax.hpp"

namespace fint {

namespace {
struct ConstInfo { ConstTag tag; const char* name; };
const ConstInfo kConsts[] = {
  {ConstTag::Zero, "0"},    {ConstTag::Suc, "Suc"},   {ConstTag::TT, "T"},
  {ConstTag::FF, "F"},      {ConstTag::K, "K"},       {ConstTag::S, "S"},
  {ConstTag::Rec, "Rec"},   {ConstTag::If, "if"},     {ConstTag::L, "L"},
  {ConstTag::Ap, "Ap"},     {ConstTag::Sing, "sing"}, {ConstTag::Cup, "cup"},
  {ConstTag::Bigcup, "bigcup"}, {ConstTag::Max, "max"}, {ConstTag::Nil, "nil"},
  {ConstTag::Append, "append"}, {ConstTag::Len, "len"}, {ConstTag::Idx, "idx"},
};
} // namespace

const char* const_name(ConstTag t) {
  for (const auto& c : kConsts)
    if (c.tag == t) return c.name;
  return "?";
}

std::optional<ConstTag> const_by_name(const std::string& s) {
  for (const auto& c : kConsts)
    if (s == c.name) return c.tag;
  return std::nullopt;
}

TermPtr t_var(const std::string& name) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Var;
  t->name = name;
  return t;
}

TermPtr t_const(ConstTag tag, TypePtr instType) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Const;
  t->tag = tag;
  t->constType = std::move(instType);
  return t;
}

TermPtr t_lam(const std::string& var, TypePtr varType, TermPtr body) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Lambda;
  t->var = var;
  t->varType = std::move(varType);
  t->body = std::move(body);
  return t;
}

TermPtr t_app(TermPtr fun, TermPtr arg) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::App;
  t->fun = std::move(fun);
  t->arg = std::move(arg);
  return t;
}

TermPtr t_apps(TermPtr fun, const std::vector<TermPtr>& args) {
  TermPtr out = std::move(fun);
  for (const auto& a : args) out = t_app(out, a);
  return out;
}

TermPtr t_numeral(int n) {
  TermPtr out = t_const(ConstTag::Zero);
  for (int i = 0; i < n; ++i) out = t_app(t_const(ConstTag::Suc), out);
  return out;
}

TermPtr t_lams(const std::vector<std::pair<std::string, TypePtr>>& vars, TermPtr body) {
  TermPtr out = std::move(body);
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) out = t_lam(it->first, it->second, out);
  return out;
}

std::string NameSet::fresh(const std::string& base) {
  std::string cand = base;
  while (contains(cand)) cand += '\'';
  mark(cand);
  return cand;
}

void free_vars(const TermPtr& t, NameSet& out) {
  switch (t->kind) {
    case Term::Kind::Var: out.mark(t->name); return;
    case Term::Kind::Const: return;
    case Term::Kind::Lambda: {
      NameSet inner;
      free_vars(t->body, inner);
      for (const auto& [n, _] : inner.used)
        if (n != t->var) out.mark(n);
      return;
    }
    case Term::Kind::App:
      free_vars(t->fun, out);
      free_vars(t->arg, out);
      return;
  }
}

bool occurs_free(const TermPtr& t, const std::string& v) {
  switch (t->kind) {
    case Term::Kind::Var: return t->name == v;
    case Term::Kind::Const: return false;
    case Term::Kind::Lambda: return t->var != v && occurs_free(t->body, v);
    case Term::Kind::App: return occurs_free(t->fun, v) || occurs_free(t->arg, v);
  }
  return false;
}

// Capture-avoiding; binders clashing with free names of the images are renamed.
TermPtr substitute(const TermPtr& t, const Subst& s) {
  if (s.empty()) return t;
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = s.find(t->name);
      return it != s.end() ? it->second : t;
    }
    case Term::Kind::Const: return t;
    case Term::Kind::Lambda: {
      Subst inner = s;
      inner.erase(t->var);
      if (inner.empty()) return t;
      bool capture = false;
      NameSet avoid;
      for (const auto& [_, img] : inner) free_vars(img, avoid);
      if (avoid.contains(t->var)) capture = true;
      std::string v = t->var;
      TermPtr body = t->body;
      if (capture) {
        for (const auto& [n, _] : inner.used) avoid.mark(n);
        free_vars(body, avoid);
        v = avoid.fresh(t->var);
        Subst ren;
        ren[t->var] = t_var(v);
        body = substitute(body, ren);
      }
      return t_lam(v, t->varType, substitute(body, inner));
    }
    case Term::Kind::App:
      return t_app(substitute(t->fun, s), substitute(t->arg, s));
  }
  return t;
}

namespace {
bool alpha_rec(const TermPtr& a, const TermPtr& b,
               std::map<std::string, std::string>& l2r,
               std::map<std::string, std::string>& r2l) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Var: {
      auto it = l2r.find(a->name);
      if (it != l2r.end()) return it->second == b->name && r2l.count(b->name) && r2l[b->name] == a->name;
      // both free
      return r2l.find(b->name) == r2l.end() && a->name == b->name;
    }
    case Term::Kind::Const:
      // Cached type instantiations are derived data and do not affect identity.
      return a->tag == b->tag;
    case Term::Kind::Lambda: {
      // Binder type annotations are part of the term.
      if ((a->varType == nullptr) != (b->varType == nullptr)) return false;
      if (a->varType && !type_equal(a->varType, b->varType)) return false;
      auto savedL = l2r.find(a->var) != l2r.end() ? std::optional(l2r[a->var]) : std::nullopt;
      auto savedR = r2l.find(b->var) != r2l.end() ? std::optional(r2l[b->var]) : std::nullopt;
      l2r[a->var] = b->var;
      r2l[b->var] = a->var;
      bool ok = alpha_rec(a->body, b->body, l2r, r2l);
      if (savedL) l2r[a->var] = *savedL; else l2r.erase(a->var);
      if (savedR) r2l[b->var] = *savedR; else r2l.erase(b->var);
      return ok;
    }
    case Term::Kind::App:
      return alpha_rec(a->fun, b->fun, l2r, r2l) && alpha_rec(a->arg, b->arg, l2r, r2l);
  }
  return false;
}
} // namespace

bool alpha_equal(const TermPtr& a, const TermPtr& b) {
  std::map<std::string, std::string> l2r, r2l;
  return alpha_rec(a, b, l2r, r2l);
}

} // namespace fint
