#include "qarch/embedding.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qarch::embedding {

std::vector<qsim::GateOp> embed_features(std::span<const double> features) {
    std::vector<qsim::GateOp> gates;
    gates.reserve(2 * features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        const double f = features[i];
        if (!std::isfinite(f)) {
            throw std::invalid_argument("embedding: feature " + std::to_string(i) +
                                        " is not finite");
        }
        const int qubit = static_cast<int>(i);
        gates.push_back(qsim::GateOp::rot_y(qubit, std::atan(f)));
        gates.push_back(qsim::GateOp::rot_z(qubit, std::atan(f * f)));
    }
    return gates;
}

}  // namespace qarch::embedding
