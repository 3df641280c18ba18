#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "qarch/statevector.hpp"

namespace qarch::vqc {

// Variational circuit: gate templates in placement order plus one trainable
// angle per rotation gate. The stored GateOp angle fields are ignored;
// rotation angles always come from `params` (k-th rotation <- params[k]).
struct CircuitSpec {
    int n_qubits = 0;
    int readout_qubit = 0;
    std::vector<qsim::GateOp> gates;
    std::vector<double> params;

    void add_rotation(qsim::GateKind kind, int qubit, double initial_angle = 0.0);
    void add_cnot(int control, int target);

    int n_params() const { return static_cast<int>(params.size()); }

    // Gates with angles substituted from params.
    std::vector<qsim::GateOp> resolved_gates() const;

    // Applies the variational gates in place, reading angles from params.
    void apply_to(qsim::Statevector& state) const;
};

// Structural comparison (kinds and qubit indices; angles excluded).
bool same_structure(const CircuitSpec& a, const CircuitSpec& b);

// Canonical text artifact of a search run:
//   # n_qubits=4 readout=0
//   RY 2 0.351700
//   CNOT 2 0
void write_circuit(const CircuitSpec& c, const std::filesystem::path& path);
CircuitSpec read_circuit(const std::filesystem::path& path);

}  // namespace qarch::vqc
