#include "check/validate.hpp"
#include "extract/axioms.hpp"

namespace fint {

namespace {

[[noreturn]] void bad(const std::string& msg, ErrorKind k = ErrorKind::Validation) {
  throw FintError(k, msg);
}

// Proof sequents stay at the explicit level: quantifiers are plain (their
// relativization spelled out as typing hypotheses), never annotated, and
// bounded quantifiers only arise from interpretations, not from proof files.
void check_explicit(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Atom:
    case Formula::Kind::Bottom: return;
    case Formula::Kind::Conj:
    case Formula::Kind::Impl:
    case Formula::Kind::Or:
    case Formula::Kind::Oplus:
    case Formula::Kind::With:
      check_explicit(f->left);
      check_explicit(f->right);
      return;
    case Formula::Kind::Bang: check_explicit(f->body); return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      if (f->varType)
        bad("proof formulas must spell out quantifier relativization; annotated binder '" +
            f->var + "' is not allowed");
      check_explicit(f->body);
      return;
    case Formula::Kind::BQ: bad("bounded quantifiers cannot appear in proof formulas");
  }
}

bool is_bang(const FormulaPtr& f) { return f->kind == Formula::Kind::Bang; }

void no_free(const std::string& x, const std::vector<FormulaPtr>& fs, const char* where) {
  for (const auto& f : fs)
    if (occurs_free(f, x))
      bad("eigenvariable '" + x + "' occurs free in " + where, ErrorKind::Eigenvariable);
}

ProofPtr compute(const ProofPtr& p) {
  auto node = std::make_shared<ProofTree>(*p);
  node->premises.clear();
  for (const auto& q : p->premises) node->premises.push_back(compute(q));

  auto prem = [&](std::size_t i) -> const Sequent& { return node->premises[i]->conclusion; };
  Dialect d = node->dialect;
  Sequent out;

  switch (node->rule) {
    case RuleTag::Id:
      check_explicit(node->formula);
      out.context = {node->formula};
      out.conclusion = node->formula;
      break;

    case RuleTag::Efq:
      check_explicit(node->formula);
      out.context = {f_bottom(d)};
      out.conclusion = node->formula;
      break;

    case RuleTag::Cut: {
      const Sequent& s1 = prem(0);
      const Sequent& s2 = prem(1);
      if (s2.context.empty()) bad("cut: second premise has no hypothesis to cut");
      if (!alpha_equal(s2.context.back(), s1.conclusion))
        bad("cut: last hypothesis of the second premise must match the first premise's "
            "conclusion; got " +
            print_formula(s2.context.back()) + " vs " + print_formula(s1.conclusion));
      out.context = s1.context;
      out.context.insert(out.context.end(), s2.context.begin(), s2.context.end() - 1);
      out.conclusion = s2.conclusion;
      break;
    }

    case RuleTag::Per: {
      const Sequent& s = prem(0);
      if (node->permIndex + 1 >= s.context.size())
        bad("per: position " + std::to_string(node->permIndex) +
            " out of range for a context of " + std::to_string(s.context.size()));
      out = s;
      std::swap(out.context[node->permIndex], out.context[node->permIndex + 1]);
      break;
    }

    case RuleTag::ConjR: {
      const Sequent& s1 = prem(0);
      const Sequent& s2 = prem(1);
      out.context = s1.context;
      out.context.insert(out.context.end(), s2.context.begin(), s2.context.end());
      out.conclusion = f_conj(s1.conclusion, s2.conclusion);
      break;
    }

    case RuleTag::ConjL: {
      const Sequent& s = prem(0);
      if (s.context.size() < 2) bad("conjunction-left needs two hypotheses to merge");
      out = s;
      FormulaPtr b = out.context.back();
      out.context.pop_back();
      FormulaPtr a = out.context.back();
      out.context.pop_back();
      out.context.push_back(f_conj(a, b));
      break;
    }

    case RuleTag::ImplR: {
      const Sequent& s = prem(0);
      if (s.context.empty()) bad("implication-right needs a hypothesis to discharge");
      out = s;
      FormulaPtr a = out.context.back();
      out.context.pop_back();
      out.conclusion = f_impl(a, s.conclusion);
      break;
    }

    case RuleTag::ImplL: {
      const Sequent& s1 = prem(0);
      const Sequent& s2 = prem(1);
      if (s2.context.empty()) bad("implication-left: second premise has no hypothesis");
      FormulaPtr b = s2.context.back();
      out.context = s1.context;
      out.context.insert(out.context.end(), s2.context.begin(), s2.context.end() - 1);
      out.context.push_back(f_impl(s1.conclusion, b));
      out.conclusion = s2.conclusion;
      break;
    }

    case RuleTag::ForallR: {
      const Sequent& s = prem(0);
      no_free(node->eigenvar, s.context, "the context of a forall-right premise");
      out = s;
      out.conclusion = f_forall(node->eigenvar, nullptr, s.conclusion);
      break;
    }

    case RuleTag::ForallL: {
      check_explicit(node->formula);
      if (node->formula->kind != Formula::Kind::Forall)
        bad("forall-left payload must be a universal formula");
      const Sequent& s = prem(0);
      if (s.context.empty()) bad("forall-left: premise has no hypothesis");
      FormulaPtr inst = substitute(node->formula->body, {{node->formula->var, node->witness}});
      if (!alpha_equal(s.context.back(), inst))
        bad("forall-left: last hypothesis must be the instance " + print_formula(inst) +
            ", got " + print_formula(s.context.back()));
      out = s;
      out.context.back() = node->formula;
      break;
    }

    case RuleTag::ExistsR: {
      check_explicit(node->formula);
      if (node->formula->kind != Formula::Kind::Exists)
        bad("exists-right payload must be an existential formula");
      const Sequent& s = prem(0);
      FormulaPtr inst = substitute(node->formula->body, {{node->formula->var, node->witness}});
      if (!alpha_equal(s.conclusion, inst))
        bad("exists-right: premise must conclude the instance " + print_formula(inst) +
            ", got " + print_formula(s.conclusion));
      out = s;
      out.conclusion = node->formula;
      break;
    }

    case RuleTag::ExistsL: {
      const Sequent& s = prem(0);
      if (s.context.empty()) bad("exists-left: premise has no hypothesis");
      std::vector<FormulaPtr> rest(s.context.begin(), s.context.end() - 1);
      no_free(node->eigenvar, rest, "the context of an exists-left premise");
      no_free(node->eigenvar, {s.conclusion}, "the conclusion of an exists-left premise");
      out = s;
      out.context.back() = f_exists(node->eigenvar, nullptr, s.context.back());
      break;
    }

    case RuleTag::Con: {
      const Sequent& s = prem(0);
      if (s.context.size() < 2) bad("contraction needs two copies of a hypothesis");
      const FormulaPtr& a = s.context[s.context.size() - 2];
      const FormulaPtr& b = s.context.back();
      if (!alpha_equal(a, b))
        bad("contraction: the last two hypotheses must coincide; got " + print_formula(a) +
            " vs " + print_formula(b));
      if (d == Dialect::AL && !is_bang(a))
        bad("linear contraction only applies to duplicable (banged) hypotheses");
      out = s;
      out.context.pop_back();
      break;
    }

    case RuleTag::Wkn: {
      check_explicit(node->formula);
      out = prem(0);
      out.context.push_back(node->formula);
      break;
    }

    case RuleTag::BangR: {
      const Sequent& s = prem(0);
      for (const auto& g : s.context)
        if (!is_bang(g))
          bad("bang-right requires every hypothesis to be banged; " + print_formula(g) +
              " is not");
      out = s;
      out.conclusion = f_bang(s.conclusion);
      break;
    }

    case RuleTag::BangL: {
      const Sequent& s = prem(0);
      if (s.context.empty()) bad("bang-left: premise has no hypothesis");
      out = s;
      out.context.back() = f_bang(s.context.back());
      break;
    }

    case RuleTag::Axiom: {
      out = axiom_conclusion(*node);
      for (const auto& g : out.context) check_explicit(g);
      check_explicit(out.conclusion);
      break;
    }
  }

  for (const auto& g : out.context)
    if (g->dialect != d) bad("hypothesis dialect does not match the proof");
  if (out.conclusion->dialect != d) bad("conclusion dialect does not match the proof");
  node->conclusion = std::move(out);
  return node;
}

} // namespace

ProofPtr validate_proof(const ProofPtr& p) { return compute(p); }

Sequent proof_conclusion(const ProofPtr& p) {
  if (!p->conclusion.conclusion) bad("proof has not been validated");
  return p->conclusion;
}

} // namespace fint
