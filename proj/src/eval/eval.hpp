#pragma once

#include "core/syntax.hpp"

#include <functional>

namespace fint {

// ---------------------------------------------------------------------------
// Symbolic normalization (beta and delta rules, fuel-bounded)
// ---------------------------------------------------------------------------

// Reduces until no redex remains or fuel runs out (ErrorKind::Fuel). Weak in
// the sense that reduction never goes under a binder, so distinct
// lambda-bodies are not identified (equality stays weakly extensional).
// Delta rules: K, S, if on T/F, Rec on 0/Suc, Ap, L on nil/append.
TermPtr normalize(const TermPtr& t, long fuel = 100000);

// Same reduction relation under a different redex-selection strategy; used
// to spot-check confluence.
TermPtr normalize_alt(const TermPtr& t, long fuel = 100000);

// True if both sides reach alpha-equal normal forms.
bool definitionally_equal(const TermPtr& a, const TermPtr& b, long fuel = 100000);

// ---------------------------------------------------------------------------
// Finite-domain values
// ---------------------------------------------------------------------------

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

struct Value {
  TypePtr type;  // concrete type, never a metavariable
  long long num = 0;            // Nat: 0..bound; Bool: 0 = F, 1 = T
  std::vector<ValuePtr> items;  // Star: the elements; Arrow: table over carrier(dom)
};

bool value_equal(const ValuePtr& a, const ValuePtr& b);
bool value_less(const ValuePtr& a, const ValuePtr& b);  // total order on one carrier
std::string print_value(const ValuePtr& v);

// Raised internally when an operation leaves the finite fragment (successor
// past the bound, sequence growing past the bound, index out of range).
// Quantifier enumeration catches it and records a skip.
struct OutOfDomain {
  std::string what;
};

struct FiniteDomain {
  int bound = 4;                       // Nat carrier is {0..bound}; also max sequence length
  long long maxCarrier = 2000000;      // refuse to enumerate carriers larger than this

  long long cardinality(const TypePtr& t) const;     // capped at maxCarrier+1
  std::vector<ValuePtr> carrier(const TypePtr& t) const;  // deterministic order
  ValuePtr value_at(const TypePtr& t, long long index) const;
  long long index_of(const ValuePtr& v) const;       // inverse of value_at
  ValuePtr zero_value(const TypePtr& t) const;       // 0, F, constant-zero table, empty sequence
};

// Application of an arrow value to an argument from its domain carrier.
ValuePtr apply_value(const FiniteDomain& dom, const ValuePtr& f, const ValuePtr& a);

// Semantic majorizability and membership, by recursion on the type.
bool value_leqstar(const FiniteDomain& dom, const ValuePtr& a, const ValuePtr& b);
bool value_elem(const ValuePtr& a, const ValuePtr& s);

// Pointwise max by type recursion (numeric max, sequence max with padding).
ValuePtr value_max(const FiniteDomain& dom, const ValuePtr& a, const ValuePtr& b);

// Sorted, duplicate-free view of a sequence (finite sets are represented this way).
ValuePtr value_as_set(const ValuePtr& s);

// Nat/Bool/Star values back to closed terms (arrows are rejected).
TermPtr reify_value(const ValuePtr& v);

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

using EvalEnv = std::map<std::string, ValuePtr>;

// Evaluation context: the finite domain plus a deterministic truth assignment
// for named predicates (seeded, so equivalence checks can vary it).
struct SemContext {
  FiniteDomain dom;
  long fuel = 100000;
  // Named predicates have no intrinsic semantics; by default they are an
  // error. Equivalence checks may opt in to a deterministic seeded truth
  // assignment instead (varying the seed varies the assignment).
  bool namedSemantics = false;
  unsigned seed = 0;
  bool named_truth(const std::string& name, const std::vector<ValuePtr>& args) const;
};

// Evaluates a term to a value. Lambdas must carry binder annotations (run the
// typechecker's annotate pass first for parsed input). Throws OutOfDomain for
// operations that leave the fragment and FintError(Fuel) when fuel runs out.
ValuePtr eval_term(const SemContext& cx, const TermPtr& t, const EvalEnv& env);

struct EvalStats {
  long skipped = 0;  // quantifier instantiations abandoned as out-of-domain
};

// Classical truth in the finite domain. Linear connectives collapse: tensor
// counts as conjunction, lollipop as implication, bang is transparent.
// Quantifier domains come from binder annotations, bounded-quantifier types,
// or a relativizing guard in the body; anything else is an error.
bool eval_formula(const SemContext& cx, const FormulaPtr& f, const EvalEnv& env,
                  EvalStats* stats = nullptr);

// Boolean-valued term deciding a quantifier-free formula over Nat/Bool atoms:
// chi = T exactly when the formula holds. Free variables stay free.
TermPtr characteristic_term(const FormulaPtr& f);

} // namespace fint
