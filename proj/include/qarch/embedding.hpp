#pragma once

#include <span>
#include <vector>

#include "qarch/statevector.hpp"

namespace qarch::embedding {

// Arctan angle embedding: for each feature f_i, RY(arctan(f_i)) then
// RZ(arctan(f_i^2)) on qubit i. One qubit per feature, qubit-major order.
// Throws std::invalid_argument on non-finite features.
std::vector<qsim::GateOp> embed_features(std::span<const double> features);

}  // namespace qarch::embedding
