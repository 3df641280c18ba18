#include "qarch/statevector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qarch::qsim {

Statevector::Statevector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("statevector: n_qubits must be in [1, " +
                                    std::to_string(kMaxQubits) + "], got " +
                                    std::to_string(n_qubits));
    }
    amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amps_[0] = Complex{1.0, 0.0};
}

void Statevector::reset_to_zero_state() {
    amps_.assign(amps_.size(), Complex{0.0, 0.0});
    amps_[0] = Complex{1.0, 0.0};
}

std::size_t Statevector::mask_for(int qubit) const {
    if (qubit < 0 || qubit >= n_qubits_) {
        throw std::out_of_range("statevector: qubit index " + std::to_string(qubit) +
                                " out of range for " + std::to_string(n_qubits_) + " qubits");
    }
    // Qubit 0 owns the most significant bit.
    return std::size_t{1} << (n_qubits_ - 1 - qubit);
}

void Statevector::apply(const GateOp& gate) {
    const std::size_t n = amps_.size();
    if (gate.kind == GateKind::Cnot) {
        if (gate.control == gate.target) {
            throw std::invalid_argument("statevector: CNOT control equals target");
        }
        const std::size_t cmask = mask_for(gate.control);
        const std::size_t tmask = mask_for(gate.target);
        // Swap the target pair within the control=1 subspace.
        for (std::size_t i = 0; i < n; ++i) {
            if ((i & cmask) && !(i & tmask)) {
                std::swap(amps_[i], amps_[i | tmask]);
            }
        }
        return;
    }

    const std::size_t tmask = mask_for(gate.target);
    const double half = 0.5 * gate.angle;
    const double c = std::cos(half);
    const double s = std::sin(half);

    switch (gate.kind) {
        case GateKind::RotX: {
            // [[cos, -i sin], [-i sin, cos]]
            const Complex ms{0.0, -s};
            for (std::size_t i = 0; i < n; ++i) {
                if (!(i & tmask)) {
                    const Complex a0 = amps_[i];
                    const Complex a1 = amps_[i | tmask];
                    amps_[i] = c * a0 + ms * a1;
                    amps_[i | tmask] = ms * a0 + c * a1;
                }
            }
            break;
        }
        case GateKind::RotY: {
            // [[cos, -sin], [sin, cos]]
            for (std::size_t i = 0; i < n; ++i) {
                if (!(i & tmask)) {
                    const Complex a0 = amps_[i];
                    const Complex a1 = amps_[i | tmask];
                    amps_[i] = c * a0 - s * a1;
                    amps_[i | tmask] = s * a0 + c * a1;
                }
            }
            break;
        }
        case GateKind::RotZ: {
            // diag(e^{-i a/2}, e^{+i a/2})
            const Complex p0{c, -s};
            const Complex p1{c, s};
            for (std::size_t i = 0; i < n; ++i) {
                amps_[i] *= (i & tmask) ? p1 : p0;
            }
            break;
        }
        case GateKind::Cnot:
            break;  // handled above
    }
}

void Statevector::apply(std::span<const GateOp> gates) {
    for (const GateOp& g : gates) apply(g);
}

double Statevector::expectation_z(int qubit) const {
    const std::size_t mask = mask_for(qubit);
    double acc = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        const double p = std::norm(amps_[i]);
        acc += (i & mask) ? -p : p;
    }
    return acc;
}

double Statevector::norm_sq() const {
    double acc = 0.0;
    for (const Complex& a : amps_) acc += std::norm(a);
    return acc;
}

Statevector zero_state(int n_qubits) { return Statevector(n_qubits); }

Statevector apply_gate(const Statevector& state, const GateOp& gate) {
    Statevector out = state;
    out.apply(gate);
    return out;
}

Statevector apply_circuit(const Statevector& state, std::span<const GateOp> gates) {
    Statevector out = state;
    out.apply(gates);
    return out;
}

}  // namespace qarch::qsim
