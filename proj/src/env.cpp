#include "qarch/env.hpp"

#include <algorithm>
#include <stdexcept>

namespace qarch::env {

bool operator==(const Action& a, const Action& b) {
    if (a.is_rotation != b.is_rotation) return false;
    if (a.is_rotation) return a.qubit == b.qubit && a.axis == b.axis;
    return a.control == b.control && a.target == b.target;
}

ActionTable ActionTable::build(int n_qubits) {
    if (n_qubits < 2) throw std::invalid_argument("action table needs at least 2 qubits");
    ActionTable t;
    t.n_qubits_ = n_qubits;
    t.entries_.reserve(static_cast<std::size_t>(3 * n_qubits + n_qubits * (n_qubits - 1)));
    for (int q = 0; q < n_qubits; ++q)
        for (int axis : {kAxisX, kAxisY, kAxisZ})
            t.entries_.push_back(Action{.is_rotation = true, .qubit = q, .axis = axis});
    for (int c = 0; c < n_qubits; ++c)
        for (int target = 0; target < n_qubits; ++target)
            if (target != c)
                t.entries_.push_back(Action{.is_rotation = false, .control = c, .target = target});
    return t;
}

const Action& ActionTable::at(std::size_t index) const {
    if (index >= entries_.size()) throw std::out_of_range("action index out of range");
    return entries_[index];
}

std::array<int, 4> encode_gate_row(const Action& action, int n_qubits) {
    if (action.is_rotation) {
        if (action.qubit < 0 || action.qubit >= n_qubits) throw std::invalid_argument("rotation qubit out of range");
        if (action.axis < kAxisX || action.axis > kAxisZ) throw std::invalid_argument("bad rotation axis code");
        return {n_qubits, 0, action.qubit, action.axis};
    }
    if (action.control < 0 || action.control >= n_qubits || action.target < 0 ||
        action.target >= n_qubits || action.control == action.target)
        throw std::invalid_argument("bad cnot endpoints");
    return {action.control, action.target, n_qubits, 0};
}

Action decode_gate_row(const std::array<int, 4>& row, int n_qubits) {
    if (row[0] == n_qubits && row[1] == 0 && row[2] >= 0 && row[2] < n_qubits && row[3] >= kAxisX &&
        row[3] <= kAxisZ)
        return Action{.is_rotation = true, .qubit = row[2], .axis = row[3]};
    if (row[2] == n_qubits && row[3] == 0 && row[0] >= 0 && row[0] < n_qubits && row[1] >= 0 &&
        row[1] < n_qubits && row[0] != row[1])
        return Action{.is_rotation = false, .control = row[0], .target = row[1]};
    throw std::invalid_argument("malformed state-matrix row");
}

double compute_reward(double y_l, double y_prev, double y_target, int l, int L) {
    if (y_l >= y_target && l < L) return 0.2 * (y_l / y_target) * static_cast<double>(L - l);
    if (y_l < y_target && l == L) return -0.2 * ((y_target - y_l) / y_target) * static_cast<double>(l);
    const double delta = (y_l - y_prev) / (y_prev + 1e-6) - 0.01 * static_cast<double>(l);
    return std::clamp(delta, -1.5, 1.5);
}

QasEnv::QasEnv(EnvConfig config, const datasets::Dataset& train, const datasets::Dataset& test)
    : config_(config),
      table_(ActionTable::build(config.n_qubits)),
      train_(vqc::EmbeddedDataset::from(train, config.n_qubits)),
      test_(vqc::EmbeddedDataset::from(test, config.n_qubits)) {
    if (config_.max_gates < 1) throw std::invalid_argument("max_gates must be positive");
    if (config_.y_target <= 0.0 || config_.y_target > 1.0)
        throw std::invalid_argument("y_target must be in (0, 1]");
    if (config_.max_epochs < 1) throw std::invalid_argument("max_epochs must be positive");
    if (config_.classifier_lr <= 0.0) throw std::invalid_argument("classifier_lr must be positive");
    y_target_ = config_.y_target;
    circuit_.n_qubits = config_.n_qubits;
    circuit_.readout_qubit = 0;
    rows_.assign(static_cast<std::size_t>(config_.max_gates), {0, 0, 0, 0});
    baseline_accuracy_ = vqc::evaluate_accuracy(circuit_, test_);
}

void QasEnv::set_y_target(double target) {
    if (target <= 0.0 || target > 1.0) throw std::invalid_argument("y_target must be in (0, 1]");
    y_target_ = target;
}

std::vector<double> QasEnv::observation(double accuracy) const {
    std::vector<double> obs;
    obs.reserve(static_cast<std::size_t>(observation_size()));
    for (const auto& row : rows_)
        for (int v : row) obs.push_back(static_cast<double>(v));
    obs.push_back(accuracy);
    return obs;
}

std::vector<double> QasEnv::reset() {
    circuit_.gates.clear();
    circuit_.params.clear();
    rows_.assign(static_cast<std::size_t>(config_.max_gates), {0, 0, 0, 0});
    gates_ = 0;
    y_prev_ = baseline_accuracy_;
    done_ = false;
    return observation(baseline_accuracy_);
}

StepResult QasEnv::step(int action_index) {
    if (done_) throw std::logic_error("step on a finished episode; call reset first");
    if (action_index < 0 || static_cast<std::size_t>(action_index) >= table_.size())
        throw std::out_of_range("action index out of range");

    const Action& action = table_.at(static_cast<std::size_t>(action_index));
    if (action.is_rotation) {
        const qsim::GateKind kind = action.axis == kAxisX   ? qsim::GateKind::RotX
                                    : action.axis == kAxisY ? qsim::GateKind::RotY
                                                            : qsim::GateKind::RotZ;
        circuit_.add_rotation(kind, action.qubit);
    } else {
        circuit_.add_cnot(action.control, action.target);
    }
    rows_[static_cast<std::size_t>(gates_)] = encode_gate_row(action, config_.n_qubits);
    ++gates_;

    const vqc::TrainOutcome outcome =
        vqc::train_classifier(circuit_, train_, test_, config_.max_epochs, y_target_, config_.classifier_lr);

    StepResult r;
    r.accuracy = outcome.test_accuracy;
    r.gate_count = gates_;
    r.y_target = y_target_;
    r.reward = compute_reward(r.accuracy, y_prev_, y_target_, gates_, config_.max_gates);
    done_ = r.accuracy >= y_target_ || gates_ == config_.max_gates;
    r.done = done_;
    r.observation = observation(r.accuracy);
    y_prev_ = r.accuracy;
    return r;
}

vqc::CircuitSpec QasEnv::circuit_from_state_matrix() const {
    vqc::CircuitSpec c;
    c.n_qubits = config_.n_qubits;
    c.readout_qubit = circuit_.readout_qubit;
    for (int i = 0; i < gates_; ++i) {
        const Action a = decode_gate_row(rows_[static_cast<std::size_t>(i)], config_.n_qubits);
        if (a.is_rotation) {
            const qsim::GateKind kind = a.axis == kAxisX   ? qsim::GateKind::RotX
                                        : a.axis == kAxisY ? qsim::GateKind::RotY
                                                           : qsim::GateKind::RotZ;
            c.add_rotation(kind, a.qubit);
        } else {
            c.add_cnot(a.control, a.target);
        }
    }
    return c;
}

}  // namespace qarch::env
