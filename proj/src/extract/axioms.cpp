#include "extract/axioms.hpp"
#include "check/typecheck.hpp"
#include "eval/eval.hpp"

#include <functional>

namespace fint {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw FintError(ErrorKind::Validation, msg); }

// The linear twin of an intuitionistic axiom bangs its hypotheses (atoms are
// their own star translation, so nothing else changes for atomic material).
FormulaPtr hyp(Dialect d, const FormulaPtr& f) { return d == Dialect::AL ? f_bang(f) : f; }

// Formulas in the image of the star translation: conjunctions of images,
// implications with a banged image on the left, universals over images,
// existentials over banged images, atoms, bottom.
bool is_star_image(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Atom:
    case Formula::Kind::Bottom: return true;
    case Formula::Kind::Conj: return is_star_image(f->left) && is_star_image(f->right);
    case Formula::Kind::Impl:
      return f->left->kind == Formula::Kind::Bang && is_star_image(f->left->body) &&
             is_star_image(f->right);
    case Formula::Kind::Forall: return is_star_image(f->body);
    case Formula::Kind::Exists:
      return f->body->kind == Formula::Kind::Bang && is_star_image(f->body->body);
    default: return false;
  }
}

void need_image(Dialect d, const FormulaPtr& f, const char* which) {
  if (d == Dialect::AL && !is_star_image(f))
    bad(std::string(which) +
        " must lie in the image of the star translation for the linear schema; " +
        print_formula(f) + " does not");
}

const SNode& at(const std::vector<SNode>& v, std::size_t i, const char* what) {
  if (i >= v.size()) bad(std::string("axiom payload too short; expected ") + what);
  return v[i];
}

void exact(const std::vector<SNode>& v, std::size_t n, const char* what) {
  if (v.size() != n) bad(std::string("axiom expects payload: ") + what);
}

std::string var_atom(const SNode& n, const char* what) {
  if (n.isList) bad(std::string("expected ") + what);
  return n.atom;
}

// Shared payload shapes
void fill_terms(ProofTree& p, const std::vector<SNode>& v, std::size_t n, const char* what) {
  exact(v, n, what);
  for (const auto& s : v) p.axiomTerms.push_back(snode_term(s));
}

std::vector<std::string> terms_payload(const ProofTree& p) {
  std::vector<std::string> out;
  for (const auto& t : p.axiomTerms) out.push_back(sexpr_of_term(t));
  return out;
}

Sequent eq_seq(Dialect d, const TermPtr& l, const TermPtr& r) {
  Sequent s;
  s.conclusion = f_eq(d, l, r, nullptr);
  return s;
}

TermPtr capp(ConstTag tag, std::vector<TermPtr> args) { return t_apps(t_const(tag), std::move(args)); }

struct AxiomDef {
  const char* name;
  int premises;  // -1 means any
  std::function<void(ProofTree&, const std::vector<SNode>&)> fill;
  std::function<std::vector<std::string>(const ProofTree&)> payload;
  std::function<Sequent(const ProofTree&)> conclude;
};

const std::vector<AxiomDef>& registry() {
  static const std::vector<AxiomDef> defs = [] {
    std::vector<AxiomDef> r;
    auto add = [&](AxiomDef d) { r.push_back(std::move(d)); };

    // --- booleans ---------------------------------------------------------
    add({"bool-T", 0,
         [](ProofTree&, const std::vector<SNode>& v) { exact(v, 0, "none"); },
         [](const ProofTree&) { return std::vector<std::string>{}; },
         [](const ProofTree& p) {
           Sequent s;
           s.conclusion = f_typing(p.dialect, ty_bool(), t_const(ConstTag::TT));
           return s;
         }});
    add({"bool-F", 0,
         [](ProofTree&, const std::vector<SNode>& v) { exact(v, 0, "none"); },
         [](const ProofTree&) { return std::vector<std::string>{}; },
         [](const ProofTree& p) {
           Sequent s;
           s.conclusion = f_typing(p.dialect, ty_bool(), t_const(ConstTag::FF));
           return s;
         }});
    add({"bool-neq", 0,
         [](ProofTree&, const std::vector<SNode>& v) { exact(v, 0, "none"); },
         [](const ProofTree&) { return std::vector<std::string>{}; },
         [](const ProofTree& p) {
           Dialect d = p.dialect;
           FormulaPtr ne = f_eq(d, t_const(ConstTag::TT), t_const(ConstTag::FF), nullptr);
           Sequent s;
           s.conclusion = f_impl(hyp(d, ne), f_bottom(d));
           return s;
         }});
    add({"bool-elim", 0,
         [](ProofTree& p, const std::vector<SNode>& v) {
           exact(v, 2, "a schema variable and a formula");
           p.eigenvar = var_atom(v[0], "a schema variable");
           p.axiomFormula = snode_formula(v[1], p.dialect);
         },
         [](const ProofTree& p) {
           return std::vector<std::string>{p.eigenvar, sexpr_of_formula(p.axiomFormula)};
         },
         [](const ProofTree& p) {
           Dialect d = p.dialect;
           need_image(d, p.axiomFormula, "the boolean case-split formula");
           FormulaPtr az = p.axiomFormula;
           FormulaPtr at_ = substitute(az, {{p.eigenvar, t_const(ConstTag::TT)}});
           FormulaPtr af = substitute(az, {{p.eigenvar, t_const(ConstTag::FF)}});
           Sequent s;
           s.context = {hyp(d, at_), hyp(d, af),
                        hyp(d, f_typing(d, ty_bool(), t_var(p.eigenvar)))};
           s.conclusion = az;
           return s;
         }});

    // --- typing -----------------------------------------------------------
    add({"typing", 0,
         [](ProofTree& p, const std::vector<SNode>& v) {
           exact(v, 2, "a constant and its type");
           std::string cn = var_atom(v[0], "a constant name");
           auto tag = const_by_name(cn);
           if (!tag) bad("'" + cn + "' is not a constant");
           p.axiomType = snode_type(v[1]);
           if (!type_matches_schema(*tag, p.axiomType))
             bad("type " + print_type(p.axiomType) + " does not fit constant '" + cn + "'");
           p.axiomTerms = {t_const(*tag)};
         },
         [](const ProofTree& p) {
           return std::vector<std::string>{const_name(p.axiomTerms[0]->tag),
                                           sexpr_of_type(p.axiomType)};
         },
         [](const ProofTree& p) {
           Sequent s;
           s.conclusion = f_typing(p.dialect, p.axiomType, p.axiomTerms[0]);
           return s;
         }});
    add({"ap", 0,
         [](ProofTree& p, const std::vector<SNode>& v) {
           exact(v, 3, "a function type and two terms");
           p.axiomType = snode_type(v[0]);
           if (p.axiomType->kind != FiniteType::Kind::Arrow)
             bad("the ap axiom needs an arrow type");
           p.axiomTerms = {snode_term(v[1]), snode_term(v[2])};
         },
         [](const ProofTree& p) {
           return std::vector<std::string>{sexpr_of_type(p.axiomType),
                                           sexpr_of_term(p.axiomTerms[0]),
                                           sexpr_of_term(p.axiomTerms[1])};
         },
         [](const ProofTree& p) {
           Dialect d = p.dialect;
           Sequent s;
           s.context = {hyp(d, f_typing(d, p.axiomType, p.axiomTerms[0])),
                        hyp(d, f_typing(d, p.axiomType->dom, p.axiomTerms[1]))};
           s.conclusion =
               f_typing(d, p.axiomType->cod, t_app(p.axiomTerms[0], p.axiomTerms[1]));
           return s;
         }});

    // --- equality ---------------------------------------------------------
    add({"refl", 0,
         [](ProofTree& p, const std::vector<SNode>& v) { fill_terms(p, v, 1, "one term"); },
         terms_payload,
         [](const ProofTree& p) { return eq_seq(p.dialect, p.axiomTerms[0], p.axiomTerms[0]); }});
    add({"sym", 0,
         [](ProofTree& p, const std::vector<SNode>& v) { fill_terms(p, v, 2, "two terms"); },
         terms_payload,
         [](const ProofTree& p) {
           Dialect d = p.dialect;
           Sequent s = eq_seq(d, p.axiomTerms[1], p.axiomTerms[0]);
           s.context = {hyp(d, f_eq(d, p.axiomTerms[0], p.axiomTerms[1], nullptr))};
           return s;
         }});
    add({"trans", 0,
         [](ProofTree& p, const std::vector<SNode>& v) { fill_terms(p, v, 3, "three terms"); },
         terms_payload,
         [](const ProofTree& p) {
           Dialect d = p.dialect;
           Sequent s = eq_seq(d, p.axiomTerms[0], p.axiomTerms[2]);
           s.context = {hyp(d, f_eq(d, p.axiomTerms[0], p.axiomTerms[1], nullptr)),
                        hyp(d, f_eq(d, p.axiomTerms[1], p.axiomTerms[2], nullptr))};
           return s;
         }});
    add({"eq-subst", 0,
         [](ProofTree& p, const std::vector<SNode>& v) {
           exact(v, 4, "a variable and three terms");
           p.eigenvar = var_atom(v[0], "a variable");
           p.axiomTerms = {snode_term(v[1]), snode_term(v[2]), snode_term(v[3])};
         },
         [](const ProofTree& p) {
           std::vector<std::string> out{p.eigenvar};
           for (const auto& t : p.axiomTerms) out.push_back(sexpr_of_term(t));
           return out;
         },
         [](const ProofTree& p) {
           Dialect d = p.dialect;
           const auto& t = p.axiomTerms[0];
           const auto& a = p.axiomTerms[1];
           const auto& b = p.axiomTerms[2];
           Sequent s = eq_seq(d, substitute(t, {{p.eigenvar, a}}),
                              substitute(t, {{p.eigenvar, b}}));
           s.context = {hyp(d, f_eq(d, a, b, nullptr))};
           return s;
         }});
    add({"leibniz", 0,
         [](ProofTree& p, const std::vector<SNode>& v) {
           exact(v, 4, "a variable, a formula, and two terms");
           p.eigenvar = var_atom(v[0], "a variable");
           p.axiomFormula = snode_formula(v[1], p.dialect);
           p.axiomTerms = {snode_term(v[2]), snode_term(v[3])};
         },
         [](const ProofTree& p) {
           return std::vector<std::string>{p.eigenvar, sexpr_of_formula(p.axiomFormula),
                                           sexpr_of_term(p.axiomTerms[0]),
                                           sexpr_of_term(p.axiomTerms[1])};
         },
         [](const ProofTree& p) {
           Dialect d = p.dialect;
           need_image(d, p.axiomFormula, "the replacement formula");
           const auto& a = p.axiomTerms[0];
           const auto& b = p.axiomTerms[1];
           Sequent s;
           s.context = {hyp(d, substitute(p.axiomFormula, {{p.eigenvar, a}})),
                        hyp(d, f_eq(d, a, b, nullptr))};
           s.conclusion = substitute(p.axiomFormula, {{p.eigenvar, b}});
           return s;
         }});

    // --- defining equations ----------------------------------------------
    add({"if-true", 0,
         [](ProofTree& p, const std::vector<SNode>& v) { fill_terms(p, v, 2, "two terms"); },
         terms_payload,
         [](const ProofTree& p) {
           return eq_seq(p.dialect,
                         capp(ConstTag::If,
                              {t_const(ConstTag::TT), p.axiomTerms[0], p.axiomTerms[1]}),
                         p.axiomTerms[0]);
         }});
    add({"if-false", 0,
         [](ProofTree& p, const std::vector<SNode>& v) { fill_terms(p, v, 2, "two terms"); },
         terms_payload,
         [](const ProofTree& p) {
           return eq_seq(p.dialect,
                         capp(ConstTag::If,
                              {t_const(ConstTag::FF), p.axiomTerms[0], p.axiomTerms[1]}),
                         p.axiomTerms[1]);
         }});
    add({"k-eq", 0,
         [](ProofTree& p, const std::vector<SNode>& v) { fill_terms(p, v, 2, "two terms"); },
         terms_payload,
         [](const ProofTree& p) {
           return eq_seq(p.dialect, capp(ConstTag::K, {p.axiomTerms[0], p.axiomTerms[1]}),
                         p.axiomTerms[0]);
         }});
    add({"s-eq", 0,
         [](ProofTree& p, const std::vector<SNode>& v) { fill_terms(p, v, 3, "three terms"); },
         terms_payload,
         [](const ProofTree& p) {
           const auto& f = p.axiomTerms[0];
           const auto& g = p.axiomTerms[1];
           const auto& x = p.axiomTerms[2];
           return eq_seq(p.dialect, capp(ConstTag::S, {f, g, x}),
                         t_app(t_app(f, x), t_app(g, x)));
         }});
    add({"rec-zero", 0,
         [](ProofTree& p, const std::vector<SNode>& v) { fill_terms(p, v, 2, "two terms"); },
         terms_payload,
         [](const ProofTree& p) {
           return eq_seq(p.dialect,
                         capp(ConstTag::Rec,
                              {t_const(ConstTag::Zero), p.axiomTerms[0], p.axiomTerms[1]}),
                         p.axiomTerms[0]);
         }});
    add({"rec-suc", 0,
         [](ProofTree& p, const std::vector<SNode>& v) { fill_terms(p, v, 3, "three terms"); },
         terms_payload,
         [](const ProofTree& p) {
           const auto& n = p.axiomTerms[0];
           const auto& b = p.axiomTerms[1];
           const auto& s = p.axiomTerms[2];
           return eq_seq(p.dialect,
                         capp(ConstTag::Rec, {t_app(t_const(ConstTag::Suc), n), b, s}),
                         t_app(t_app(s, n), capp(ConstTag::Rec, {n, b, s})));
         }});
    add({"l-nil", 0,
         [](ProofTree& p, const std::vector<SNode>& v) { fill_terms(p, v, 2, "two terms"); },
         terms_payload,
         [](const ProofTree& p) {
           return eq_seq(p.dialect,
                         capp(ConstTag::L,
                              {t_const(ConstTag::Nil), p.axiomTerms[0], p.axiomTerms[1]}),
                         p.axiomTerms[1]);
         }});
    add({"l-append", 0,
         [](ProofTree& p, const std::vector<SNode>& v) { fill_terms(p, v, 4, "four terms"); },
         terms_payload,
         [](const ProofTree& p) {
           const auto& s = p.axiomTerms[0];
           const auto& x = p.axiomTerms[1];
           const auto& f = p.axiomTerms[2];
           const auto& z = p.axiomTerms[3];
           return eq_seq(p.dialect,
                         capp(ConstTag::L, {capp(ConstTag::Append, {s, x}), f, z}),
                         t_app(t_app(f, capp(ConstTag::L, {s, f, z})), x));
         }});
    add({"beta", 0,
         [](ProofTree& p, const std::vector<SNode>& v) {
           fill_terms(p, v, 2, "a lambda term and its argument");
           if (p.axiomTerms[0]->kind != Term::Kind::Lambda)
             bad("the beta axiom needs a lambda abstraction");
         },
         terms_payload,
         [](const ProofTree& p) {
           const auto& lam = p.axiomTerms[0];
           const auto& arg = p.axiomTerms[1];
           return eq_seq(p.dialect, t_app(lam, arg),
                         substitute(lam->body, {{lam->var, arg}}));
         }});
    add({"eval-eq", 0,
         [](ProofTree& p, const std::vector<SNode>& v) { fill_terms(p, v, 2, "two terms"); },
         terms_payload,
         [](const ProofTree& p) {
           if (!definitionally_equal(p.axiomTerms[0], p.axiomTerms[1]))
             bad("terms " + print_term(p.axiomTerms[0]) + " and " +
                 print_term(p.axiomTerms[1]) + " do not share a normal form");
           return eq_seq(p.dialect, p.axiomTerms[0], p.axiomTerms[1]);
         }});

    // --- order ------------------------------------------------------------
    add({"le-refl", 0,
         [](ProofTree& p, const std::vector<SNode>& v) { fill_terms(p, v, 1, "one term"); },
         terms_payload,
         [](const ProofTree& p) {
           Sequent s;
           s.conclusion = f_le(p.dialect, p.axiomTerms[0], p.axiomTerms[0]);
           return s;
         }});

    // --- induction --------------------------------------------------------
    add({"induction", 2,
         [](ProofTree& p, const std::vector<SNode>& v) {
           exact(v, 2, "the induction variable and the formula");
           p.eigenvar = var_atom(v[0], "a variable");
           p.axiomFormula = snode_formula(v[1], p.dialect);
         },
         [](const ProofTree& p) {
           return std::vector<std::string>{p.eigenvar, sexpr_of_formula(p.axiomFormula)};
         },
         [](const ProofTree& p) {
           Dialect d = p.dialect;
           need_image(d, p.axiomFormula, "the induction formula");
           const std::string& n = p.eigenvar;
           FormulaPtr a = p.axiomFormula;
           FormulaPtr a0 = substitute(a, {{n, t_const(ConstTag::Zero)}});
           FormulaPtr asuc = substitute(a, {{n, t_app(t_const(ConstTag::Suc), t_var(n))}});
           FormulaPtr natn = f_typing(d, ty_nat(), t_var(n));

           Sequent base;
           base.conclusion = a0;
           Sequent step;
           step.context = {hyp(d, a), hyp(d, natn)};
           step.conclusion = asuc;
           if (!alpha_equal(p.premises[0]->conclusion, base))
             bad("induction base premise must conclude " + print_sequent(base) + ", got " +
                 print_sequent(p.premises[0]->conclusion));
           if (!alpha_equal(p.premises[1]->conclusion, step))
             bad("induction step premise must conclude " + print_sequent(step) + ", got " +
                 print_sequent(p.premises[1]->conclusion));

           Sequent s;
           s.context = {hyp(d, natn)};
           s.conclusion = a;
           return s;
         }});
    return r;
  }();
  return defs;
}

const AxiomDef& lookup(const std::string& name) {
  for (const auto& d : registry())
    if (name == d.name) return d;
  std::string known;
  for (const auto& d : registry()) known += std::string(known.empty() ? "" : ", ") + d.name;
  bad("unknown axiom '" + name + "' (known: " + known + ")");
}

} // namespace

void axiom_fill(ProofTree& p, const std::vector<SNode>& payload) {
  lookup(p.axiomName).fill(p, payload);
}

std::vector<std::string> axiom_payload_sexprs(const ProofTree& p) {
  return lookup(p.axiomName).payload(p);
}

Sequent axiom_conclusion(const ProofTree& p) {
  const AxiomDef& d = lookup(p.axiomName);
  if (d.premises >= 0 && p.premises.size() != static_cast<std::size_t>(d.premises))
    bad("axiom '" + p.axiomName + "' takes " + std::to_string(d.premises) +
        " premise(s), got " + std::to_string(p.premises.size()));
  return d.conclude(p);
}

std::vector<std::string> axiom_names() {
  std::vector<std::string> out;
  for (const auto& d : registry()) out.push_back(d.name);
  return out;
}

} // namespace fint
