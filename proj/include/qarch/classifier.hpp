#pragma once

#include <span>
#include <vector>

#include "qarch/circuit.hpp"
#include "qarch/datasets.hpp"
#include "qarch/statevector.hpp"

namespace qarch::vqc {

// Embedding-prefix states computed once per dataset. The prefix is fixed per
// sample, so classifier training only ever re-applies the variational gates.
struct EmbeddedDataset {
    int n_qubits = 0;
    std::vector<qsim::Statevector> states;
    std::vector<int> labels;

    static EmbeddedDataset from(const datasets::Dataset& d, int n_qubits);
    std::size_t size() const { return labels.size(); }
};

struct TrainOutcome {
    std::vector<double> trained_params;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    int epochs_run = 0;
    double final_loss = 0.0;
};

inline constexpr double kProbClip = 1e-7;
inline constexpr double kDefaultClassifierLr = 0.05;

// (1 + <Z_readout>) / 2 after embedding x and applying the variational gates.
double predict_prob(const CircuitSpec& circuit, std::span<const double> x);
double predict_prob(const CircuitSpec& circuit, const qsim::Statevector& embedded);

// Binary cross-entropy; y_pred is clamped to [kProbClip, 1 - kProbClip].
double bce_loss(int y_true, double y_pred);
double bce_loss(const CircuitSpec& circuit, const EmbeddedDataset& batch);  // batch mean

// Mean-BCE gradient via the exact parameter-shift rule (±pi/2 angle shifts).
std::vector<double> param_shift_grad(const CircuitSpec& circuit, const EmbeddedDataset& batch);
std::vector<double> param_shift_grad(const CircuitSpec& circuit, const datasets::Dataset& batch);

// Full-batch Adam until train accuracy reaches target_acc or max_epochs
// gradient steps have run. Parameters are trained in place (warm start).
TrainOutcome train_classifier(CircuitSpec& circuit, const EmbeddedDataset& train,
                              const EmbeddedDataset& test, int max_epochs, double target_acc,
                              double lr = kDefaultClassifierLr);
TrainOutcome train_classifier(CircuitSpec& circuit, const datasets::Dataset& train,
                              const datasets::Dataset& test, int max_epochs, double target_acc,
                              double lr = kDefaultClassifierLr);

// Fraction of samples whose thresholded prediction (>= 0.5 -> class 1)
// matches the label. Throws on an empty dataset.
double evaluate_accuracy(const CircuitSpec& circuit, const EmbeddedDataset& d);
double evaluate_accuracy(const CircuitSpec& circuit, const datasets::Dataset& d);

}  // namespace qarch::vqc
