#pragma once

#include <array>
#include <vector>

#include "qarch/classifier.hpp"
#include "qarch/circuit.hpp"
#include "qarch/datasets.hpp"

namespace qarch::env {

// rot_axis codes; 0 marks "no rotation" inside state-matrix rows.
inline constexpr int kAxisX = 1;
inline constexpr int kAxisY = 2;
inline constexpr int kAxisZ = 3;

struct Action {
    bool is_rotation = true;
    int qubit = 0;  // rotation target
    int axis = kAxisX;
    int control = 0, target = 0;  // cnot endpoints
};

bool operator==(const Action& a, const Action& b);

// All single-qubit rotations (qubit-major, axis order X,Y,Z) followed by
// CNOTs over every ordered pair (control-major, targets ascending).
// Size is 3n + n(n-1).
class ActionTable {
public:
    static ActionTable build(int n_qubits);

    std::size_t size() const { return entries_.size(); }
    const Action& at(std::size_t index) const;
    int n_qubits() const { return n_qubits_; }

private:
    int n_qubits_ = 0;
    std::vector<Action> entries_;
};

// Row layout: [control, target, rot_qubit, rot_axis].
// Rotation rows use control = n (sentinel), target = 0.
// CNOT rows use rot_qubit = n (sentinel), rot_axis = 0.
std::array<int, 4> encode_gate_row(const Action& action, int n_qubits);
Action decode_gate_row(const std::array<int, 4>& row, int n_qubits);

struct EnvConfig {
    int n_qubits = 4;
    int max_gates = 20;  // L
    double y_target = 0.85;
    int max_epochs = 15;     // classifier epochs per placement
    double classifier_lr = 0.05;
};

struct StepResult {
    std::vector<double> observation;
    double reward = 0.0;
    bool done = false;
    double accuracy = 0.0;  // y_l on the test set
    int gate_count = 0;
    double y_target = 0.0;  // target in force for this step
};

// Three-branch shaped reward.
//   success before the gate budget: 0.2 * (y_l / y_target) * (L - l)
//   budget exhausted short of target: -0.2 * ((y_target - y_l) / y_target) * l
//   otherwise: relative improvement minus a length penalty, clipped to [-1.5, 1.5]
double compute_reward(double y_l, double y_prev, double y_target, int l, int L);

// One gate-placement episode over a fixed train/test split. Each step appends
// a gate, retrains the classifier (warm start), and reports the test accuracy
// both in the reward and as the last observation entry.
class QasEnv {
public:
    QasEnv(EnvConfig config, const datasets::Dataset& train, const datasets::Dataset& test);

    std::vector<double> reset();
    StepResult step(int action_index);

    const ActionTable& actions() const { return table_; }
    const vqc::CircuitSpec& circuit() const { return circuit_; }
    const std::vector<std::array<int, 4>>& state_matrix() const { return rows_; }
    int observation_size() const { return 4 * config_.max_gates + 1; }
    int gate_count() const { return gates_; }
    bool done() const { return done_; }
    double last_accuracy() const { return y_prev_; }
    double baseline_accuracy() const { return baseline_accuracy_; }
    double y_target() const { return y_target_; }
    void set_y_target(double target);
    const EnvConfig& config() const { return config_; }

    // Structural view of the placed gates, angles zeroed.
    vqc::CircuitSpec circuit_from_state_matrix() const;

private:
    std::vector<double> observation(double accuracy) const;

    EnvConfig config_;
    ActionTable table_;
    vqc::EmbeddedDataset train_;
    vqc::EmbeddedDataset test_;
    vqc::CircuitSpec circuit_;
    std::vector<std::array<int, 4>> rows_;
    double baseline_accuracy_ = 0.0;
    double y_target_ = 0.0;
    double y_prev_ = 0.0;
    int gates_ = 0;
    bool done_ = true;  // reset() starts the first episode
};

}  // namespace qarch::env
