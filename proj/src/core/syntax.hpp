#pragma once

// Core ASTs: finite types, terms, formulas, sequents, proof trees.
// Everything is immutable after construction and shared via shared_ptr,
// so all operations below are pure functions.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fint {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class ErrorKind {
  Syntax,        // unparseable input
  Dialect,       // connective not allowed in requested dialect
  Type,          // term/formula type error
  Validation,    // proof tree locally incorrect
  Eigenvariable, // forallR/existsL side condition violated
  Unknown,       // unknown theory/instance/axiom name
  Unsupported,   // operation not available for these inputs
  Domain,        // finite-domain evaluation impossible (carrier too large)
  Fuel,          // normalization fuel exhausted
};

struct FintError : std::runtime_error {
  ErrorKind kind;
  int line = -1, col = -1;
  FintError(ErrorKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
  FintError(ErrorKind k, const std::string& msg, int ln, int co)
      : std::runtime_error(msg), kind(k), line(ln), col(co) {}
};

// ---------------------------------------------------------------------------
// Finite types: B, N, arrows, finite-sequence star types
// ---------------------------------------------------------------------------

struct FiniteType;
using TypePtr = std::shared_ptr<const FiniteType>;

struct FiniteType {
  enum class Kind { Nat, Bool, Arrow, Star, Meta };
  Kind kind;
  TypePtr dom, cod; // Arrow
  TypePtr elem;     // Star
  int metaId = -1;  // Meta: unification variable, only ever alive inside the typechecker
};

TypePtr ty_nat();
TypePtr ty_bool();
TypePtr ty_arrow(TypePtr dom, TypePtr cod);
// Right-nested arrow d1 -> d2 -> ... -> cod; returns cod when doms is empty.
TypePtr ty_arrows(const std::vector<TypePtr>& doms, TypePtr cod);
TypePtr ty_star(TypePtr elem);

bool type_equal(const TypePtr& a, const TypePtr& b);
bool type_equal(const std::vector<TypePtr>& a, const std::vector<TypePtr>& b);
std::string print_type(const TypePtr& t);

// ---------------------------------------------------------------------------
// Terms: lambda calculus over the System-T-with-sequences constant set
// ---------------------------------------------------------------------------

enum class ConstTag {
  Zero,   // 0 : N
  Suc,    // N -> N
  TT,     // T : B
  FF,     // F : B
  K,      // a -> b -> a
  S,      // (a -> b -> c) -> (a -> b) -> a -> c
  Rec,    // N -> a -> (N -> a -> a) -> a
  If,     // B -> a -> a -> a
  L,      // a* -> (b -> a -> b) -> b -> b   (fold over snoc lists)
  Ap,     // (a -> b) -> a -> b              (formal application combinator)
  Sing,   // a -> a*
  Cup,    // a* -> a* -> a*                  (set union; sorted dedup)
  Bigcup, // (a -> b*) -> a* -> b*           (union of images over a set)
  Max,    // a -> a -> a                     (type-directed pointwise max)
  Nil,    // a*
  Append, // a* -> a -> a*                   (snoc)
  Len,    // a* -> N
  Idx,    // a* -> N -> a
};

const char* const_name(ConstTag t);
std::optional<ConstTag> const_by_name(const std::string& s);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Var, Const, Lambda, App };
  Kind kind;
  std::string name;   // Var
  ConstTag tag;       // Const
  TypePtr constType;  // Const: resolved monomorphic type (may be null; ignored by equality)
  std::string var;    // Lambda
  TypePtr varType;    // Lambda
  TermPtr body;       // Lambda
  TermPtr fun, arg;   // App
};

TermPtr t_var(const std::string& name);
TermPtr t_const(ConstTag tag, TypePtr instType = nullptr);
TermPtr t_lam(const std::string& var, TypePtr varType, TermPtr body);
TermPtr t_app(TermPtr fun, TermPtr arg);
TermPtr t_apps(TermPtr fun, const std::vector<TermPtr>& args);
// Numeral n as Suc^n 0.
TermPtr t_numeral(int n);
// Nested lambda over a variable list.
TermPtr t_lams(const std::vector<std::pair<std::string, TypePtr>>& vars, TermPtr body);

struct NameSet {
  std::map<std::string, int> used;
  void mark(const std::string& n) { used[n] = 1; }
  bool contains(const std::string& n) const { return used.count(n) != 0; }
  // base, base', base'', ... the first variant not yet marked; marks and returns it.
  std::string fresh(const std::string& base);
};

void free_vars(const TermPtr& t, NameSet& out);
bool occurs_free(const TermPtr& t, const std::string& v);
using Subst = std::map<std::string, TermPtr>;
TermPtr substitute(const TermPtr& t, const Subst& s);
bool alpha_equal(const TermPtr& a, const TermPtr& b);
std::string print_term(const TermPtr& t);

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

enum class Dialect { IL, AL };

// Predicate identity of an atom. Typing atoms ("N(t)", "(N -> N)(f)") are the
// computational predicates of every shipped instance; the built-in relations
// and user-named atoms are non-computational.
struct PredId {
  enum class Kind { Named, Typing, Eq, Le, LeqStar, Elem };
  Kind kind = Kind::Named;
  std::string name; // Named
  TypePtr type;     // Typing: the type itself; Eq/LeqStar/Elem: type index (null until resolved)
};

bool pred_equal(const PredId& a, const PredId& b);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// bq[tau-vec; y-vec; a-vec]{A} once instantiated by a concrete parameter choice.
// guard None + no bounds = plain typed quantifier block; Elem/LeqStar add the
// x in a / x <=* a restriction; monotone adds the x <=* x restriction.
enum class BqGuard { None, Elem, LeqStar };

struct Formula {
  enum class Kind {
    Atom,
    Bottom,
    Conj,   // IL "and" / AL tensor
    Impl,   // IL "->" / AL lollipop
    Or,     // IL only
    Oplus,  // AL additive disjunction (pre-desugar only)
    With,   // AL additive conjunction (pre-desugar only)
    Bang,   // AL only
    Forall,
    Exists,
    BQ,
  };
  Kind kind;
  Dialect dialect;
  // Atom
  PredId pred;
  std::vector<TermPtr> args;
  // Conj/Impl/Or/Oplus/With
  FormulaPtr left, right;
  // Bang/Forall/Exists/BQ body
  FormulaPtr body;
  // Forall/Exists
  std::string var;
  TypePtr varType; // null = unannotated (formal explicit-typing level)
  // BQ
  std::vector<std::string> bqVars;
  std::vector<TypePtr> bqTypes;   // source types tau-vec
  std::vector<TermPtr> bqBounds;  // bound terms a-vec (empty when guard needs none)
  BqGuard bqGuard = BqGuard::None;
  bool bqMonotone = false;
};

FormulaPtr f_atom(Dialect d, PredId pred, std::vector<TermPtr> args);
FormulaPtr f_typing(Dialect d, TypePtr ty, TermPtr arg);
FormulaPtr f_eq(Dialect d, TermPtr l, TermPtr r, TypePtr index = nullptr);
FormulaPtr f_le(Dialect d, TermPtr l, TermPtr r);
FormulaPtr f_leqstar(Dialect d, TermPtr l, TermPtr r, TypePtr index = nullptr);
FormulaPtr f_elem(Dialect d, TermPtr l, TermPtr r, TypePtr index = nullptr);
FormulaPtr f_bottom(Dialect d);
FormulaPtr f_conj(FormulaPtr l, FormulaPtr r);
FormulaPtr f_impl(FormulaPtr l, FormulaPtr r);
FormulaPtr f_or(FormulaPtr l, FormulaPtr r);
FormulaPtr f_oplus(FormulaPtr l, FormulaPtr r);
FormulaPtr f_with(FormulaPtr l, FormulaPtr r);
FormulaPtr f_bang(FormulaPtr a);
FormulaPtr f_forall(const std::string& var, TypePtr varType, FormulaPtr body);
FormulaPtr f_exists(const std::string& var, TypePtr varType, FormulaPtr body);
FormulaPtr f_bq(std::vector<std::string> vars, std::vector<TypePtr> types,
                std::vector<TermPtr> bounds, BqGuard guard, bool monotone, FormulaPtr body);
// n-ary conjunction; true-ish for empty input is not needed, so empty is rejected.
FormulaPtr f_conjs(const std::vector<FormulaPtr>& fs);

void free_vars(const FormulaPtr& f, NameSet& out);
bool occurs_free(const FormulaPtr& f, const std::string& v);
FormulaPtr substitute(const FormulaPtr& f, const Subst& s);
bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b);
std::string print_formula(const FormulaPtr& f);
// Recursively retags a formula tree with the given dialect, rejecting nodes the
// dialect forbids (Or in AL; Oplus/With/Bang in IL).
FormulaPtr set_dialect(const FormulaPtr& f, Dialect d);
// Renames nested binders so no binder shadows another binder or a free name.
FormulaPtr rename_apart(const FormulaPtr& f);

// ---------------------------------------------------------------------------
// Sequents and proof trees
// ---------------------------------------------------------------------------

struct Sequent {
  std::vector<FormulaPtr> context; // order is significant; exchange is a rule
  FormulaPtr conclusion;
};

bool alpha_equal(const Sequent& a, const Sequent& b);
std::string print_sequent(const Sequent& s);

enum class RuleTag {
  Id, Efq, Cut, Per,
  ConjR, ConjL,   // tensor rules in AL, "and" rules in IL
  ImplR, ImplL,   // lollipop rules in AL, "->" rules in IL
  ForallR, ForallL, ExistsR, ExistsL,
  Con, Wkn, BangR, BangL,
  Axiom,
};

const char* rule_name(RuleTag t);

struct ProofTree;
using ProofPtr = std::shared_ptr<const ProofTree>;

struct ProofTree {
  RuleTag rule;
  Dialect dialect;
  std::vector<ProofPtr> premises;
  // payloads (rule-specific; unused fields stay empty)
  FormulaPtr formula;  // Id/Efq: the formula; Wkn: added formula; ForallL/ExistsR: the quantified formula
  TermPtr witness;     // ForallL/ExistsR instantiation
  std::string eigenvar; // ForallR/ExistsL; also the schema variable of bool-elim/induction axioms
  TypePtr eigenType;    // optional annotation for the bound variable
  std::size_t permIndex = 0; // Per: swaps context slots permIndex, permIndex+1
  std::string axiomName;
  FormulaPtr axiomFormula;       // schema formula (bool-elim, induction)
  std::vector<TermPtr> axiomTerms; // term payloads (refl, if-eq, ...)
  TypePtr axiomType;             // type payload (typing facts)
  Sequent conclusion;
};

std::string print_proof(const ProofPtr& p);

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

TypePtr parse_type(const std::string& text);
TermPtr parse_term(const std::string& text);
FormulaPtr parse_formula(const std::string& text, Dialect d);
ProofPtr parse_proof(const std::string& text); // includes local-correctness validation

} // namespace fint
