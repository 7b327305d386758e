#pragma once

// Bidirectional typechecker with unification. Constants have schematic types
// (K, S, Rec, ... are type families); each occurrence is instantiated with
// fresh metavariables which must all be solved by the end of checking.

#include "core/syntax.hpp"

namespace fint {

using TypeEnv = std::map<std::string, TypePtr>;

// Schema of a constant with metavariables 0..n-1; instantiate by substitution.
TypePtr const_schema(ConstTag tag, int metaBase = 0);

// Infers the type of t under env. All metavariables must resolve; otherwise a
// Type error (ambiguous or ill-typed) is thrown.
TypePtr typecheck_term(const TermPtr& t, const TypeEnv& env);

// Checks t against an expected type.
void check_term_type(const TermPtr& t, const TypeEnv& env, const TypePtr& expected);

// Returns a copy of t with every lambda binder annotated and every constant
// occurrence carrying its concrete instance type (needed by the evaluator).
// Throws when a binder or constant type stays ambiguous. Pass an expected
// type when the context determines one (e.g. witness terms).
TermPtr annotate_term(const TermPtr& t, const TypeEnv& env, const TypePtr& expected = nullptr);

// True iff ty is a valid instance of tag's type schema.
bool type_matches_schema(ConstTag tag, const TypePtr& ty);

// Typechecks a formula and returns a copy with resolved relation type indices
// (Eq/Le/LeqStar/Elem PredId.type) and with inferred quantifier domains left
// as they were (annotations are not invented). Unannotated quantified
// variables get their types from use; a variable with no constraining use is
// an error only if a relation index stays unresolved.
FormulaPtr typecheck_formula(const FormulaPtr& f, const TypeEnv& env);

Sequent typecheck_sequent(const Sequent& s, const TypeEnv& env);

} // namespace fint
