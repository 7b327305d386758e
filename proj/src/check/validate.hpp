#pragma once

#include "core/syntax.hpp"

namespace fint {

// Recomputes every conclusion bottom-up from the rule applications and checks
// side conditions (eigenvariables, bang discipline, dialect coherence).
// Returns the same tree with each node's `conclusion` filled in; throws
// FintError(Validation/Eigenvariable/...) on the first violation.
ProofPtr validate_proof(const ProofPtr& p);

// Conclusion of a single validated node (convenience accessor).
Sequent proof_conclusion(const ProofPtr& p);

} // namespace fint
