#pragma once

// S-expression layer used by the proof file format. Proof payloads (types,
// terms, formulas) are written as S-expressions, e.g. (atom N x) or
// (lolli (atom P) (atom Q)); see parse_proof/print_proof for the rule syntax.

#include "core/syntax.hpp"

namespace fint {

struct SNode {
  bool isList = false;
  std::string atom;         // when !isList
  std::vector<SNode> items; // when isList
  int line = 1, col = 1;
};

// Reads one S-expression; fails on trailing input.
SNode read_sexpr(const std::string& text);

TypePtr snode_type(const SNode& n);
TermPtr snode_term(const SNode& n);
FormulaPtr snode_formula(const SNode& n, Dialect d);
// Scans for dialect-committing connective heads; nullopt when neutral,
// throws on a mix of both dialects.
std::optional<Dialect> snode_formula_dialect(const SNode& n);

std::string sexpr_of_type(const TypePtr& t);
std::string sexpr_of_term(const TermPtr& t);
std::string sexpr_of_formula(const FormulaPtr& f);

} // namespace fint
