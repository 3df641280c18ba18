#pragma once

#include <complex>
#include <span>
#include <vector>

namespace qarch::qsim {

inline constexpr int kMaxQubits = 14;

enum class GateKind { RotX, RotY, RotZ, Cnot };

// One placed gate: a single-qubit Pauli rotation or a CNOT.
struct GateOp {
    GateKind kind;
    int target = 0;       // rotated qubit, or CNOT target
    int control = -1;     // CNOT only
    double angle = 0.0;   // rotations only, radians

    static GateOp rot_x(int qubit, double angle) { return {GateKind::RotX, qubit, -1, angle}; }
    static GateOp rot_y(int qubit, double angle) { return {GateKind::RotY, qubit, -1, angle}; }
    static GateOp rot_z(int qubit, double angle) { return {GateKind::RotZ, qubit, -1, angle}; }
    static GateOp rotation(GateKind kind, int qubit, double angle) { return {kind, qubit, -1, angle}; }
    static GateOp cnot(int control, int target) { return {GateKind::Cnot, target, control, 0.0}; }

    bool is_rotation() const { return kind != GateKind::Cnot; }
};

// Dense n-qubit statevector.
//
// Bit convention: qubit 0 is the MOST significant bit of the basis index.
// For n = 2 the basis order is |00>, |01>, |10>, |11> with the left bit
// belonging to qubit 0, so |10> (qubit 0 set) sits at index 2.
class Statevector {
public:
    using Complex = std::complex<double>;

    // |0...0> on n_qubits. Throws std::invalid_argument outside [1, kMaxQubits].
    explicit Statevector(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const Complex> amplitudes() const { return amps_; }
    Complex& amp(std::size_t i) { return amps_[i]; }
    const Complex& amp(std::size_t i) const { return amps_[i]; }

    // In-place gate application over strided index pairs.
    void apply(const GateOp& gate);
    void apply(std::span<const GateOp> gates);

    // <Z_qubit>: sum of |amp|^2 signed by the qubit's bit value. Exact, no shots.
    double expectation_z(int qubit) const;

    double norm_sq() const;

    void reset_to_zero_state();

private:
    std::size_t mask_for(int qubit) const;  // validates the index

    int n_qubits_;
    std::vector<Complex> amps_;
};

// Spec-level constructors and pure wrappers.
Statevector zero_state(int n_qubits);
Statevector apply_gate(const Statevector& state, const GateOp& gate);
Statevector apply_circuit(const Statevector& state, std::span<const GateOp> gates);

}  // namespace qarch::qsim
