#include "core/syntax.hpp"

namespace fint {

bool pred_equal(const PredId& a, const PredId& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case PredId::Kind::Named: return a.name == b.name;
    case PredId::Kind::Typing: return type_equal(a.type, b.type);
    case PredId::Kind::Eq:
    case PredId::Kind::LeqStar:
    case PredId::Kind::Elem:
      // Type indices are inferred decorations; the relation symbol is the identity.
      return true;
    case PredId::Kind::Le: return true;
  }
  return false;
}

namespace {
FormulaPtr mk(Formula::Kind k, Dialect d) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->dialect = d;
  return f;
}
FormulaPtr with_binary(Formula::Kind k, FormulaPtr l, FormulaPtr r) {
  if (l->dialect != r->dialect)
    throw FintError(ErrorKind::Dialect, "mixed dialects in binary connective");
  auto g = std::make_shared<Formula>();
  g->kind = k;
  g->dialect = l->dialect;
  g->left = std::move(l);
  g->right = std::move(r);
  return g;
}
} // namespace

FormulaPtr f_atom(Dialect d, PredId pred, std::vector<TermPtr> args) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Atom;
  f->dialect = d;
  f->pred = std::move(pred);
  f->args = std::move(args);
  return f;
}

FormulaPtr f_typing(Dialect d, TypePtr ty, TermPtr arg) {
  PredId p;
  p.kind = PredId::Kind::Typing;
  p.type = std::move(ty);
  return f_atom(d, std::move(p), {std::move(arg)});
}

FormulaPtr f_eq(Dialect d, TermPtr l, TermPtr r, TypePtr index) {
  PredId p;
  p.kind = PredId::Kind::Eq;
  p.type = std::move(index);
  return f_atom(d, std::move(p), {std::move(l), std::move(r)});
}

FormulaPtr f_le(Dialect d, TermPtr l, TermPtr r) {
  PredId p;
  p.kind = PredId::Kind::Le;
  return f_atom(d, std::move(p), {std::move(l), std::move(r)});
}

FormulaPtr f_leqstar(Dialect d, TermPtr l, TermPtr r, TypePtr index) {
  PredId p;
  p.kind = PredId::Kind::LeqStar;
  p.type = std::move(index);
  return f_atom(d, std::move(p), {std::move(l), std::move(r)});
}

FormulaPtr f_elem(Dialect d, TermPtr l, TermPtr r, TypePtr index) {
  PredId p;
  p.kind = PredId::Kind::Elem;
  p.type = std::move(index);
  return f_atom(d, std::move(p), {std::move(l), std::move(r)});
}

FormulaPtr f_bottom(Dialect d) { return mk(Formula::Kind::Bottom, d); }

FormulaPtr f_conj(FormulaPtr l, FormulaPtr r) {
  return with_binary(Formula::Kind::Conj, std::move(l), std::move(r));
}
FormulaPtr f_impl(FormulaPtr l, FormulaPtr r) {
  return with_binary(Formula::Kind::Impl, std::move(l), std::move(r));
}
FormulaPtr f_or(FormulaPtr l, FormulaPtr r) {
  if (l->dialect != Dialect::IL) throw FintError(ErrorKind::Dialect, "\\/ is intuitionistic syntax");
  return with_binary(Formula::Kind::Or, std::move(l), std::move(r));
}
FormulaPtr f_oplus(FormulaPtr l, FormulaPtr r) {
  if (l->dialect != Dialect::AL) throw FintError(ErrorKind::Dialect, "(+) is linear syntax");
  return with_binary(Formula::Kind::Oplus, std::move(l), std::move(r));
}
FormulaPtr f_with(FormulaPtr l, FormulaPtr r) {
  if (l->dialect != Dialect::AL) throw FintError(ErrorKind::Dialect, "(&) is linear syntax");
  return with_binary(Formula::Kind::With, std::move(l), std::move(r));
}

FormulaPtr f_bang(FormulaPtr a) {
  if (a->dialect != Dialect::AL) throw FintError(ErrorKind::Dialect, "! is linear syntax");
  auto f = mk(Formula::Kind::Bang, a->dialect);
  auto g = std::make_shared<Formula>(*f);
  g->body = std::move(a);
  return g;
}

FormulaPtr f_forall(const std::string& var, TypePtr varType, FormulaPtr body) {
  auto g = std::make_shared<Formula>();
  g->kind = Formula::Kind::Forall;
  g->dialect = body->dialect;
  g->var = var;
  g->varType = std::move(varType);
  g->body = std::move(body);
  return g;
}

FormulaPtr f_exists(const std::string& var, TypePtr varType, FormulaPtr body) {
  auto g = std::make_shared<Formula>();
  g->kind = Formula::Kind::Exists;
  g->dialect = body->dialect;
  g->var = var;
  g->varType = std::move(varType);
  g->body = std::move(body);
  return g;
}

FormulaPtr f_bq(std::vector<std::string> vars, std::vector<TypePtr> types,
                std::vector<TermPtr> bounds, BqGuard guard, bool monotone, FormulaPtr body) {
  if (vars.size() != types.size())
    throw FintError(ErrorKind::Type, "bq var/type arity mismatch");
  if (guard != BqGuard::None && bounds.size() != vars.size())
    throw FintError(ErrorKind::Type, "bq bound arity mismatch");
  auto g = std::make_shared<Formula>();
  g->kind = Formula::Kind::BQ;
  g->dialect = body->dialect;
  g->bqVars = std::move(vars);
  g->bqTypes = std::move(types);
  g->bqBounds = std::move(bounds);
  g->bqGuard = guard;
  g->bqMonotone = monotone;
  g->body = std::move(body);
  return g;
}

FormulaPtr f_conjs(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) throw FintError(ErrorKind::Type, "empty conjunction");
  FormulaPtr out = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) out = f_conj(out, fs[i]);
  return out;
}

void free_vars(const FormulaPtr& f, NameSet& out) {
  switch (f->kind) {
    case Formula::Kind::Atom:
      for (const auto& a : f->args) free_vars(a, out);
      return;
    case Formula::Kind::Bottom: return;
    case Formula::Kind::Conj:
    case Formula::Kind::Impl:
    case Formula::Kind::Or:
    case Formula::Kind::Oplus:
    case Formula::Kind::With:
      free_vars(f->left, out);
      free_vars(f->right, out);
      return;
    case Formula::Kind::Bang: free_vars(f->body, out); return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      NameSet inner;
      free_vars(f->body, inner);
      for (const auto& [n, _] : inner.used)
        if (n != f->var) out.mark(n);
      return;
    }
    case Formula::Kind::BQ: {
      for (const auto& b : f->bqBounds) free_vars(b, out);
      NameSet inner;
      free_vars(f->body, inner);
      for (const auto& [n, _] : inner.used) {
        bool bound = false;
        for (const auto& v : f->bqVars)
          if (v == n) { bound = true; break; }
        if (!bound) out.mark(n);
      }
      return;
    }
  }
}

bool occurs_free(const FormulaPtr& f, const std::string& v) {
  NameSet s;
  free_vars(f, s);
  return s.contains(v);
}

FormulaPtr substitute(const FormulaPtr& f, const Subst& s) {
  if (s.empty()) return f;
  switch (f->kind) {
    case Formula::Kind::Atom: {
      auto g = std::make_shared<Formula>(*f);
      for (auto& a : g->args) a = substitute(a, s);
      return g;
    }
    case Formula::Kind::Bottom: return f;
    case Formula::Kind::Conj:
    case Formula::Kind::Impl:
    case Formula::Kind::Or:
    case Formula::Kind::Oplus:
    case Formula::Kind::With: {
      auto g = std::make_shared<Formula>(*f);
      g->left = substitute(f->left, s);
      g->right = substitute(f->right, s);
      return g;
    }
    case Formula::Kind::Bang: {
      auto g = std::make_shared<Formula>(*f);
      g->body = substitute(f->body, s);
      return g;
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      Subst inner = s;
      inner.erase(f->var);
      if (inner.empty()) return f;
      NameSet avoid;
      for (const auto& [_, img] : inner) free_vars(img, avoid);
      std::string v = f->var;
      FormulaPtr body = f->body;
      if (avoid.contains(f->var)) {
        for (const auto& [n, _] : inner.used) avoid.mark(n);
        free_vars(body, avoid);
        v = avoid.fresh(f->var);
        Subst ren;
        ren[f->var] = t_var(v);
        body = substitute(body, ren);
      }
      auto g = std::make_shared<Formula>(*f);
      g->var = v;
      g->body = substitute(body, inner);
      return g;
    }
    case Formula::Kind::BQ: {
      Subst inner = s;
      for (const auto& v : f->bqVars) inner.erase(v);
      auto g = std::make_shared<Formula>(*f);
      for (auto& b : g->bqBounds) b = substitute(b, s); // bounds are outside the binder
      if (inner.empty()) return g;
      NameSet avoid;
      for (const auto& [_, img] : inner) free_vars(img, avoid);
      bool clash = false;
      for (const auto& v : f->bqVars)
        if (avoid.contains(v)) { clash = true; break; }
      FormulaPtr body = f->body;
      if (clash) {
        for (const auto& [n, _] : inner.used) avoid.mark(n);
        free_vars(body, avoid);
        Subst ren;
        for (auto& v : g->bqVars) {
          std::string nv = avoid.fresh(v);
          if (nv != v) ren[v] = t_var(nv);
          v = nv;
        }
        body = substitute(body, ren);
      }
      g->body = substitute(body, inner);
      return g;
    }
  }
  return f;
}

namespace {
struct AlphaCtx {
  std::map<std::string, std::string> l2r, r2l;
};

// Term alpha-comparison under renamings accumulated from formula binders.
bool alpha_term(const TermPtr& a, const TermPtr& b, AlphaCtx& cx) {
  struct W {
    AlphaCtx& cx;
    bool go(const TermPtr& x, const TermPtr& y) {
      if (x->kind != y->kind) return false;
      switch (x->kind) {
        case Term::Kind::Var: {
          auto it = cx.l2r.find(x->name);
          if (it != cx.l2r.end())
            return it->second == y->name && cx.r2l.count(y->name) && cx.r2l[y->name] == x->name;
          return cx.r2l.find(y->name) == cx.r2l.end() && x->name == y->name;
        }
        case Term::Kind::Const: return x->tag == y->tag;
        case Term::Kind::Lambda: {
          if ((x->varType == nullptr) != (y->varType == nullptr)) return false;
          if (x->varType && !type_equal(x->varType, y->varType)) return false;
          auto sL = cx.l2r.count(x->var) ? std::optional(cx.l2r[x->var]) : std::nullopt;
          auto sR = cx.r2l.count(y->var) ? std::optional(cx.r2l[y->var]) : std::nullopt;
          cx.l2r[x->var] = y->var;
          cx.r2l[y->var] = x->var;
          bool ok = go(x->body, y->body);
          if (sL) cx.l2r[x->var] = *sL; else cx.l2r.erase(x->var);
          if (sR) cx.r2l[y->var] = *sR; else cx.r2l.erase(y->var);
          return ok;
        }
        case Term::Kind::App: return go(x->fun, y->fun) && go(x->arg, y->arg);
      }
      return false;
    }
  } w{cx};
  return w.go(a, b);
}

bool alpha_form(const FormulaPtr& a, const FormulaPtr& b, AlphaCtx& cx) {
  if (a->kind != b->kind || a->dialect != b->dialect) return false;
  switch (a->kind) {
    case Formula::Kind::Atom: {
      if (!pred_equal(a->pred, b->pred)) return false;
      if (a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!alpha_term(a->args[i], b->args[i], cx)) return false;
      return true;
    }
    case Formula::Kind::Bottom: return true;
    case Formula::Kind::Conj:
    case Formula::Kind::Impl:
    case Formula::Kind::Or:
    case Formula::Kind::Oplus:
    case Formula::Kind::With:
      return alpha_form(a->left, b->left, cx) && alpha_form(a->right, b->right, cx);
    case Formula::Kind::Bang: return alpha_form(a->body, b->body, cx);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      if ((a->varType == nullptr) != (b->varType == nullptr)) return false;
      if (a->varType && !type_equal(a->varType, b->varType)) return false;
      auto sL = cx.l2r.count(a->var) ? std::optional(cx.l2r[a->var]) : std::nullopt;
      auto sR = cx.r2l.count(b->var) ? std::optional(cx.r2l[b->var]) : std::nullopt;
      cx.l2r[a->var] = b->var;
      cx.r2l[b->var] = a->var;
      bool ok = alpha_form(a->body, b->body, cx);
      if (sL) cx.l2r[a->var] = *sL; else cx.l2r.erase(a->var);
      if (sR) cx.r2l[b->var] = *sR; else cx.r2l.erase(b->var);
      return ok;
    }
    case Formula::Kind::BQ: {
      if (a->bqGuard != b->bqGuard || a->bqMonotone != b->bqMonotone) return false;
      if (a->bqVars.size() != b->bqVars.size()) return false;
      if (!type_equal(a->bqTypes, b->bqTypes)) return false;
      if (a->bqBounds.size() != b->bqBounds.size()) return false;
      for (std::size_t i = 0; i < a->bqBounds.size(); ++i)
        if (!alpha_term(a->bqBounds[i], b->bqBounds[i], cx)) return false;
      std::vector<std::optional<std::string>> sL, sR;
      for (std::size_t i = 0; i < a->bqVars.size(); ++i) {
        sL.push_back(cx.l2r.count(a->bqVars[i]) ? std::optional(cx.l2r[a->bqVars[i]]) : std::nullopt);
        sR.push_back(cx.r2l.count(b->bqVars[i]) ? std::optional(cx.r2l[b->bqVars[i]]) : std::nullopt);
        cx.l2r[a->bqVars[i]] = b->bqVars[i];
        cx.r2l[b->bqVars[i]] = a->bqVars[i];
      }
      bool ok = alpha_form(a->body, b->body, cx);
      for (std::size_t i = a->bqVars.size(); i-- > 0;) {
        if (sL[i]) cx.l2r[a->bqVars[i]] = *sL[i]; else cx.l2r.erase(a->bqVars[i]);
        if (sR[i]) cx.r2l[b->bqVars[i]] = *sR[i]; else cx.r2l.erase(b->bqVars[i]);
      }
      return ok;
    }
  }
  return false;
}
} // namespace

bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b) {
  AlphaCtx cx;
  return alpha_form(a, b, cx);
}

bool alpha_equal(const Sequent& a, const Sequent& b) {
  if (a.context.size() != b.context.size()) return false;
  for (std::size_t i = 0; i < a.context.size(); ++i)
    if (!alpha_equal(a.context[i], b.context[i])) return false;
  return alpha_equal(a.conclusion, b.conclusion);
}

FormulaPtr set_dialect(const FormulaPtr& f, Dialect d) {
  auto g = std::make_shared<Formula>(*f);
  g->dialect = d;
  switch (f->kind) {
    case Formula::Kind::Atom:
    case Formula::Kind::Bottom: return g;
    case Formula::Kind::Or:
      if (d == Dialect::AL) throw FintError(ErrorKind::Dialect, "\\/ is intuitionistic syntax");
      g->left = set_dialect(f->left, d);
      g->right = set_dialect(f->right, d);
      return g;
    case Formula::Kind::Oplus:
    case Formula::Kind::With:
      if (d == Dialect::IL) throw FintError(ErrorKind::Dialect, "additive connective is linear syntax");
      g->left = set_dialect(f->left, d);
      g->right = set_dialect(f->right, d);
      return g;
    case Formula::Kind::Conj:
    case Formula::Kind::Impl:
      g->left = set_dialect(f->left, d);
      g->right = set_dialect(f->right, d);
      return g;
    case Formula::Kind::Bang:
      if (d == Dialect::IL) throw FintError(ErrorKind::Dialect, "! is linear syntax");
      g->body = set_dialect(f->body, d);
      return g;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
    case Formula::Kind::BQ:
      g->body = set_dialect(f->body, d);
      return g;
  }
  return g;
}

namespace {
FormulaPtr rename_rec(const FormulaPtr& f, NameSet& taken, const Subst& ren) {
  switch (f->kind) {
    case Formula::Kind::Atom:
    case Formula::Kind::Bottom:
      return substitute(f, ren);
    case Formula::Kind::Conj:
    case Formula::Kind::Impl:
    case Formula::Kind::Or:
    case Formula::Kind::Oplus:
    case Formula::Kind::With: {
      auto g = std::make_shared<Formula>(*f);
      g->left = rename_rec(f->left, taken, ren);
      g->right = rename_rec(f->right, taken, ren);
      return g;
    }
    case Formula::Kind::Bang: {
      auto g = std::make_shared<Formula>(*f);
      g->body = rename_rec(f->body, taken, ren);
      return g;
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      std::string nv = taken.contains(f->var) ? taken.fresh(f->var) : (taken.mark(f->var), f->var);
      Subst inner = ren;
      if (nv != f->var) inner[f->var] = t_var(nv);
      else inner.erase(f->var);
      auto g = std::make_shared<Formula>(*f);
      g->var = nv;
      g->body = rename_rec(f->body, taken, inner);
      return g;
    }
    case Formula::Kind::BQ: {
      auto g = std::make_shared<Formula>(*f);
      for (auto& b : g->bqBounds) b = substitute(b, ren);
      Subst inner = ren;
      for (auto& v : g->bqVars) {
        std::string nv = taken.contains(v) ? taken.fresh(v) : (taken.mark(v), v);
        if (nv != v) inner[v] = t_var(nv);
        else inner.erase(v);
        v = nv;
      }
      g->body = rename_rec(f->body, taken, inner);
      return g;
    }
  }
  return f;
}
} // namespace

// Bound names are made distinct from each other and from every free name.
// Free occurrences are untouched; the first binder keeps its spelling when it can.
FormulaPtr rename_apart(const FormulaPtr& f) {
  NameSet taken;
  free_vars(f, taken);
  return rename_rec(f, taken, Subst{});
}

const char* rule_name(RuleTag t) {
  switch (t) {
    case RuleTag::Id: return "id";
    case RuleTag::Efq: return "efq";
    case RuleTag::Cut: return "cut";
    case RuleTag::Per: return "per";
    case RuleTag::ConjR: return "conjR";
    case RuleTag::ConjL: return "conjL";
    case RuleTag::ImplR: return "implR";
    case RuleTag::ImplL: return "implL";
    case RuleTag::ForallR: return "forallR";
    case RuleTag::ForallL: return "forallL";
    case RuleTag::ExistsR: return "existsR";
    case RuleTag::ExistsL: return "existsL";
    case RuleTag::Con: return "con";
    case RuleTag::Wkn: return "wkn";
    case RuleTag::BangR: return "bangR";
    case RuleTag::BangL: return "bangL";
    case RuleTag::Axiom: return "axiom";
  }
  return "?";
}

} // namespace fint
