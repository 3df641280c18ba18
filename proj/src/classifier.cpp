#include "qarch/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qarch/adam.hpp"
#include "qarch/embedding.hpp"

namespace qarch::vqc {

namespace {

double clamp_prob(double p) { return std::clamp(p, kProbClip, 1.0 - kProbClip); }

double prob_from_state(const qsim::Statevector& state, int readout_qubit) {
    return 0.5 * (1.0 + state.expectation_z(readout_qubit));
}

}  // namespace

EmbeddedDataset EmbeddedDataset::from(const datasets::Dataset& d, int n_qubits) {
    if (d.n_features != n_qubits) {
        throw std::invalid_argument("embedded dataset: feature count must equal qubit count");
    }
    EmbeddedDataset out;
    out.n_qubits = n_qubits;
    out.labels = d.labels;
    out.states.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        qsim::Statevector sv(n_qubits);
        const auto gates = embedding::embed_features(d.row(i));
        sv.apply(gates);
        out.states.push_back(std::move(sv));
    }
    return out;
}

double predict_prob(const CircuitSpec& circuit, const qsim::Statevector& embedded) {
    qsim::Statevector sv = embedded;
    circuit.apply_to(sv);
    return prob_from_state(sv, circuit.readout_qubit);
}

double predict_prob(const CircuitSpec& circuit, std::span<const double> x) {
    if (static_cast<int>(x.size()) != circuit.n_qubits) {
        throw std::invalid_argument("predict_prob: feature count must equal qubit count");
    }
    qsim::Statevector sv(circuit.n_qubits);
    sv.apply(embedding::embed_features(x));
    circuit.apply_to(sv);
    return prob_from_state(sv, circuit.readout_qubit);
}

double bce_loss(int y_true, double y_pred) {
    const double p = clamp_prob(y_pred);
    return y_true == 1 ? -std::log(p) : -std::log(1.0 - p);
}

double bce_loss(const CircuitSpec& circuit, const EmbeddedDataset& batch) {
    if (batch.size() == 0) throw std::invalid_argument("bce_loss: empty batch");
    double acc = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        acc += bce_loss(batch.labels[i], predict_prob(circuit, batch.states[i]));
    }
    return acc / static_cast<double>(batch.size());
}

std::vector<double> param_shift_grad(const CircuitSpec& circuit, const EmbeddedDataset& batch) {
    if (batch.size() == 0) throw std::invalid_argument("param_shift_grad: empty batch");
    if (circuit.n_params() < 1) {
        throw std::invalid_argument("param_shift_grad: circuit has no parameters");
    }

    const auto gates = circuit.resolved_gates();
    const std::size_t n_gates = gates.size();
    constexpr double kShift = std::numbers::pi / 2.0;

    // Reused across samples: states[j] is the state before gate j.
    std::vector<qsim::Statevector> states(n_gates + 1, qsim::Statevector(circuit.n_qubits));
    qsim::Statevector scratch(circuit.n_qubits);

    std::vector<double> grad(circuit.params.size(), 0.0);
    for (std::size_t s = 0; s < batch.size(); ++s) {
        states[0] = batch.states[s];
        for (std::size_t j = 0; j < n_gates; ++j) {
            states[j + 1] = states[j];
            states[j + 1].apply(gates[j]);
        }
        const double y_pred = clamp_prob(prob_from_state(states[n_gates], circuit.readout_qubit));
        const int y = batch.labels[s];
        const double dl_dy = -static_cast<double>(y) / y_pred + (1.0 - y) / (1.0 - y_pred);

        std::size_t k = 0;
        for (std::size_t j = 0; j < n_gates; ++j) {
            if (!gates[j].is_rotation()) continue;
            double z[2];
            for (int side = 0; side < 2; ++side) {
                scratch = states[j];
                qsim::GateOp shifted = gates[j];
                shifted.angle += side == 0 ? kShift : -kShift;
                scratch.apply(shifted);
                for (std::size_t r = j + 1; r < n_gates; ++r) scratch.apply(gates[r]);
                z[side] = scratch.expectation_z(circuit.readout_qubit);
            }
            grad[k] += dl_dy * 0.5 * (z[0] - z[1]) / 2.0;
            ++k;
        }
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (double& g : grad) g *= inv;
    return grad;
}

std::vector<double> param_shift_grad(const CircuitSpec& circuit, const datasets::Dataset& batch) {
    return param_shift_grad(circuit, EmbeddedDataset::from(batch, circuit.n_qubits));
}

double evaluate_accuracy(const CircuitSpec& circuit, const EmbeddedDataset& d) {
    if (d.size() == 0) throw std::invalid_argument("evaluate_accuracy: empty dataset");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double p = predict_prob(circuit, d.states[i]);
        const int predicted = p >= 0.5 ? 1 : 0;
        if (predicted == d.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(d.size());
}

double evaluate_accuracy(const CircuitSpec& circuit, const datasets::Dataset& d) {
    return evaluate_accuracy(circuit, EmbeddedDataset::from(d, circuit.n_qubits));
}

TrainOutcome train_classifier(CircuitSpec& circuit, const EmbeddedDataset& train,
                              const EmbeddedDataset& test, int max_epochs, double target_acc,
                              double lr) {
    if (max_epochs < 1) throw std::invalid_argument("train_classifier: max_epochs must be >= 1");

    TrainOutcome out;
    if (circuit.n_params() == 0) {
        out.train_accuracy = evaluate_accuracy(circuit, train);
        out.test_accuracy = evaluate_accuracy(circuit, test);
        out.final_loss = bce_loss(circuit, train);
        return out;
    }

    Adam opt(lr);
    int epochs = 0;
    double train_acc = evaluate_accuracy(circuit, train);
    while (train_acc < target_acc && epochs < max_epochs) {
        const auto grad = param_shift_grad(circuit, train);
        opt.step(circuit.params, grad);
        ++epochs;
        train_acc = evaluate_accuracy(circuit, train);
    }

    out.trained_params = circuit.params;
    out.train_accuracy = train_acc;
    out.test_accuracy = evaluate_accuracy(circuit, test);
    out.epochs_run = epochs;
    out.final_loss = bce_loss(circuit, train);
    return out;
}

TrainOutcome train_classifier(CircuitSpec& circuit, const datasets::Dataset& train,
                              const datasets::Dataset& test, int max_epochs, double target_acc,
                              double lr) {
    return train_classifier(circuit, EmbeddedDataset::from(train, circuit.n_qubits),
                            EmbeddedDataset::from(test, circuit.n_qubits), max_epochs, target_acc,
                            lr);
}

}  // namespace qarch::vqc
