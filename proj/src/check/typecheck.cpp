#include "check/typecheck.hpp"

#include <deque>
#include <functional>

namespace fint {

namespace {

TypePtr ty_meta(int id) {
  auto t = std::make_shared<FiniteType>();
  t->kind = FiniteType::Kind::Meta;
  t->metaId = id;
  return t;
}

struct Unifier {
  int next = 0;
  std::map<int, TypePtr> sol;

  TypePtr fresh() { return ty_meta(next++); }

  // Follows solved-meta links at the head only.
  TypePtr shallow(TypePtr t) {
    while (t->kind == FiniteType::Kind::Meta) {
      auto it = sol.find(t->metaId);
      if (it == sol.end()) return t;
      t = it->second;
    }
    return t;
  }

  bool occurs(int id, const TypePtr& t0) {
    TypePtr t = shallow(t0);
    switch (t->kind) {
      case FiniteType::Kind::Meta: return t->metaId == id;
      case FiniteType::Kind::Arrow: return occurs(id, t->dom) || occurs(id, t->cod);
      case FiniteType::Kind::Star: return occurs(id, t->elem);
      default: return false;
    }
  }

  void unify(const TypePtr& a0, const TypePtr& b0, const char* what) {
    TypePtr a = shallow(a0), b = shallow(b0);
    if (a->kind == FiniteType::Kind::Meta && b->kind == FiniteType::Kind::Meta &&
        a->metaId == b->metaId)
      return;
    if (a->kind == FiniteType::Kind::Meta) {
      if (occurs(a->metaId, b))
        throw FintError(ErrorKind::Type, std::string("infinite type in ") + what);
      sol[a->metaId] = b;
      return;
    }
    if (b->kind == FiniteType::Kind::Meta) {
      unify(b, a, what);
      return;
    }
    if (a->kind != b->kind)
      throw FintError(ErrorKind::Type, std::string("type mismatch in ") + what + ": " +
                                           print_type(zonk_loose(a)) + " vs " +
                                           print_type(zonk_loose(b)));
    switch (a->kind) {
      case FiniteType::Kind::Arrow:
        unify(a->dom, b->dom, what);
        unify(a->cod, b->cod, what);
        return;
      case FiniteType::Kind::Star: unify(a->elem, b->elem, what); return;
      default: return;
    }
  }

  // Deep substitution; leaves unsolved metas in place.
  TypePtr zonk_loose(const TypePtr& t0) {
    TypePtr t = shallow(t0);
    switch (t->kind) {
      case FiniteType::Kind::Arrow: return ty_arrow(zonk_loose(t->dom), zonk_loose(t->cod));
      case FiniteType::Kind::Star: return ty_star(zonk_loose(t->elem));
      default: return t;
    }
  }

  bool fully_solved(const TypePtr& t0) {
    TypePtr t = shallow(t0);
    switch (t->kind) {
      case FiniteType::Kind::Meta: return false;
      case FiniteType::Kind::Arrow: return fully_solved(t->dom) && fully_solved(t->cod);
      case FiniteType::Kind::Star: return fully_solved(t->elem);
      default: return true;
    }
  }

  TypePtr zonk_strict(const TypePtr& t, const char* what) {
    if (!fully_solved(t))
      throw FintError(ErrorKind::Type,
                      std::string("ambiguous type in ") + what + ": " + print_type(zonk_loose(t)));
    return zonk_loose(t);
  }
};

} // namespace

TypePtr const_schema(ConstTag tag, int metaBase) {
  auto m = [&](int i) { return ty_meta(metaBase + i); };
  TypePtr a = m(0), b = m(1), c = m(2);
  switch (tag) {
    case ConstTag::Zero: return ty_nat();
    case ConstTag::Suc: return ty_arrow(ty_nat(), ty_nat());
    case ConstTag::TT:
    case ConstTag::FF: return ty_bool();
    case ConstTag::K: return ty_arrows({a, b}, a);
    case ConstTag::S: return ty_arrows({ty_arrows({a, b}, c), ty_arrow(a, b), a}, c);
    case ConstTag::Rec: return ty_arrows({ty_nat(), a, ty_arrows({ty_nat(), a}, a)}, a);
    case ConstTag::If: return ty_arrows({ty_bool(), a, a}, a);
    case ConstTag::L: return ty_arrows({ty_star(a), ty_arrows({b, a}, b), b}, b);
    case ConstTag::Ap: return ty_arrows({ty_arrow(a, b), a}, b);
    case ConstTag::Sing: return ty_arrow(a, ty_star(a));
    case ConstTag::Cup: return ty_arrows({ty_star(a), ty_star(a)}, ty_star(a));
    case ConstTag::Bigcup: return ty_arrows({ty_arrow(a, ty_star(b)), ty_star(a)}, ty_star(b));
    case ConstTag::Max: return ty_arrows({a, a}, a);
    case ConstTag::Nil: return ty_star(a);
    case ConstTag::Append: return ty_arrows({ty_star(a), a}, ty_star(a));
    case ConstTag::Len: return ty_arrow(ty_star(a), ty_nat());
    case ConstTag::Idx: return ty_arrows({ty_star(a), ty_nat()}, a);
  }
  throw FintError(ErrorKind::Type, "unknown constant");
}

namespace {

int schema_meta_count(ConstTag tag) {
  switch (tag) {
    case ConstTag::Zero:
    case ConstTag::Suc:
    case ConstTag::TT:
    case ConstTag::FF: return 0;
    case ConstTag::S: return 3;
    case ConstTag::K:
    case ConstTag::Bigcup: return 2;
    case ConstTag::L: return 2;
    case ConstTag::Ap: return 2;
    default: return 1;
  }
}

// Binder/constant types in traversal order; infer pushes, the rebuild pass
// pops. Keyed by order rather than node identity because shared subterm
// nodes may be instantiated at different types per occurrence.
using NodeTypes = std::deque<TypePtr>;

TypePtr infer(const TermPtr& t, TypeEnv env, Unifier& u, NodeTypes* rec = nullptr) {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = env.find(t->name);
      if (it == env.end())
        throw FintError(ErrorKind::Type, "unbound variable '" + t->name + "'");
      return it->second;
    }
    case Term::Kind::Const: {
      int base = u.next;
      u.next += schema_meta_count(t->tag);
      TypePtr schema = const_schema(t->tag, base);
      if (t->constType) u.unify(schema, t->constType, "constant annotation");
      if (rec) rec->push_back(schema);
      return schema;
    }
    case Term::Kind::Lambda: {
      TypePtr dom = t->varType ? t->varType : u.fresh();
      if (rec) rec->push_back(dom);
      env[t->var] = dom;
      TypePtr cod = infer(t->body, env, u, rec);
      return ty_arrow(dom, cod);
    }
    case Term::Kind::App: {
      TypePtr f = infer(t->fun, env, u, rec);
      TypePtr a = infer(t->arg, env, u, rec);
      TypePtr r = u.fresh();
      u.unify(f, ty_arrow(a, r), "application");
      return r;
    }
  }
  throw FintError(ErrorKind::Type, "malformed term");
}

TermPtr rebuild_annotated(const TermPtr& t, Unifier& u, NodeTypes& rec) {
  switch (t->kind) {
    case Term::Kind::Var: return t;
    case Term::Kind::Const: {
      TypePtr ty = u.zonk_strict(rec.front(), "constant instance");
      rec.pop_front();
      return t_const(t->tag, ty);
    }
    case Term::Kind::Lambda: {
      TypePtr ty = u.zonk_strict(rec.front(), "lambda binder");
      rec.pop_front();
      return t_lam(t->var, ty, rebuild_annotated(t->body, u, rec));
    }
    case Term::Kind::App: {
      TermPtr f = rebuild_annotated(t->fun, u, rec);
      TermPtr a = rebuild_annotated(t->arg, u, rec);
      return t_app(f, a);
    }
  }
  throw FintError(ErrorKind::Type, "malformed term");
}

} // namespace

TypePtr typecheck_term(const TermPtr& t, const TypeEnv& env) {
  Unifier u;
  TypePtr ty = infer(t, env, u);
  return u.zonk_strict(ty, "term");
}

void check_term_type(const TermPtr& t, const TypeEnv& env, const TypePtr& expected) {
  Unifier u;
  TypePtr ty = infer(t, env, u);
  u.unify(ty, expected, "term against expected type");
}

TermPtr annotate_term(const TermPtr& t, const TypeEnv& env, const TypePtr& expected) {
  Unifier u;
  NodeTypes rec;
  TypePtr ty = infer(t, env, u, &rec);
  if (expected) u.unify(ty, expected, "term against expected type");
  return rebuild_annotated(t, u, rec);
}

bool type_matches_schema(ConstTag tag, const TypePtr& ty) {
  Unifier u;
  u.next = schema_meta_count(tag);
  try {
    u.unify(const_schema(tag, 0), ty, "schema");
    return u.fully_solved(ty); // the given type itself must be concrete
  } catch (const FintError&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Formula checking
// ---------------------------------------------------------------------------

namespace {

// Pass 1 records the inferred relation index for each atom occurrence; pass 2
// rebuilds the tree with solved indices (or leaves them null when unused
// metas remain, which the evaluator tolerates by using runtime value types).
struct FormulaChecker {
  Unifier u;
  std::map<const Formula*, TypePtr> atomIndex;

  void constrain(const FormulaPtr& f, TypeEnv env) {
    switch (f->kind) {
      case Formula::Kind::Atom: {
        switch (f->pred.kind) {
          case PredId::Kind::Named:
            for (const auto& a : f->args) infer(a, env, u);
            return;
          case PredId::Kind::Typing: {
            TypePtr ty = infer(f->args[0], env, u);
            u.unify(ty, f->pred.type, "typing atom");
            return;
          }
          case PredId::Kind::Eq:
          case PredId::Kind::Le:
          case PredId::Kind::LeqStar: {
            TypePtr l = infer(f->args[0], env, u);
            TypePtr r = infer(f->args[1], env, u);
            u.unify(l, r, "relation arguments");
            if (f->pred.type) u.unify(l, f->pred.type, "relation index");
            atomIndex[f.get()] = l;
            return;
          }
          case PredId::Kind::Elem: {
            TypePtr l = infer(f->args[0], env, u);
            TypePtr r = infer(f->args[1], env, u);
            u.unify(r, ty_star(l), "membership arguments");
            if (f->pred.type) u.unify(l, f->pred.type, "relation index");
            atomIndex[f.get()] = l;
            return;
          }
        }
        return;
      }
      case Formula::Kind::Bottom: return;
      case Formula::Kind::Conj:
      case Formula::Kind::Impl:
      case Formula::Kind::Or:
      case Formula::Kind::Oplus:
      case Formula::Kind::With:
        constrain(f->left, env);
        constrain(f->right, env);
        return;
      case Formula::Kind::Bang: constrain(f->body, env); return;
      case Formula::Kind::Forall:
      case Formula::Kind::Exists:
        env[f->var] = f->varType ? f->varType : u.fresh();
        constrain(f->body, env);
        return;
      case Formula::Kind::BQ: {
        for (std::size_t i = 0; i < f->bqBounds.size(); ++i) {
          TypePtr bt = infer(f->bqBounds[i], env, u);
          // guard fixes the bound's type relative to the variable's type
          if (f->bqGuard == BqGuard::Elem) u.unify(bt, ty_star(f->bqTypes[i]), "bq bound");
          else u.unify(bt, f->bqTypes[i], "bq bound");
        }
        for (std::size_t i = 0; i < f->bqVars.size(); ++i) env[f->bqVars[i]] = f->bqTypes[i];
        constrain(f->body, env);
        return;
      }
    }
  }

  TypePtr solved_index(const FormulaPtr& f) {
    auto it = atomIndex.find(f.get());
    if (it == atomIndex.end()) return nullptr;
    if (!u.fully_solved(it->second)) return nullptr;
    return u.zonk_loose(it->second);
  }

  FormulaPtr rebuild(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Atom: {
        if (f->pred.kind == PredId::Kind::Named || f->pred.kind == PredId::Kind::Typing) return f;
        TypePtr idx = solved_index(f);
        if (!idx && f->pred.type) idx = f->pred.type;
        auto g = std::make_shared<Formula>(*f);
        g->pred.type = idx;
        return g;
      }
      case Formula::Kind::Bottom: return f;
      case Formula::Kind::Conj:
      case Formula::Kind::Impl:
      case Formula::Kind::Or:
      case Formula::Kind::Oplus:
      case Formula::Kind::With: {
        auto g = std::make_shared<Formula>(*f);
        g->left = rebuild(f->left);
        g->right = rebuild(f->right);
        return g;
      }
      case Formula::Kind::Bang:
      case Formula::Kind::Forall:
      case Formula::Kind::Exists:
      case Formula::Kind::BQ: {
        auto g = std::make_shared<Formula>(*f);
        g->body = rebuild(f->body);
        return g;
      }
    }
    return f;
  }
};

} // namespace

FormulaPtr typecheck_formula(const FormulaPtr& f, const TypeEnv& env) {
  FormulaChecker fc;
  fc.constrain(f, env);
  return fc.rebuild(f);
}

Sequent typecheck_sequent(const Sequent& s, const TypeEnv& env) {
  FormulaChecker fc;
  for (const auto& g : s.context) fc.constrain(g, env);
  fc.constrain(s.conclusion, env);
  Sequent out;
  for (const auto& g : s.context) out.context.push_back(fc.rebuild(g));
  out.conclusion = fc.rebuild(s.conclusion);
  return out;
}

} // namespace fint
