#pragma once

#include "core/syntax.hpp"
#include "core/sexpr.hpp"

namespace fint {

// Axiom leaves in proof files: (axiom name payload...). The registry knows,
// per axiom name, how to parse the payload, what sequent the leaf concludes,
// and how to print the payload back out.

// Parses the payload S-expressions into the ProofTree node. Throws on an
// unknown axiom name or a malformed payload.
void axiom_fill(ProofTree& p, const std::vector<SNode>& payload);

// Payload of an axiom node rendered back to S-expression strings, in the
// order axiom_fill consumed them.
std::vector<std::string> axiom_payload_sexprs(const ProofTree& p);

// The sequent an axiom leaf concludes, in the node's dialect.
Sequent axiom_conclusion(const ProofTree& p);

// All registered axiom names (stable order), for diagnostics.
std::vector<std::string> axiom_names();

} // namespace fint
