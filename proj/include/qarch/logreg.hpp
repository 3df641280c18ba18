#pragma once

#include "qarch/datasets.hpp"

namespace qarch::baselines {

struct LogRegModel {
    std::vector<double> coefficients;
    double intercept = 0.0;
};

// Full-batch gradient descent on L2-regularized mean BCE (intercept not
// penalized). Runs until the gradient norm drops below 1e-6 or max_iter
// passes; steps that would raise the loss are retried with a halved rate.
LogRegModel logreg_train(const datasets::Dataset& train, double l2 = 1e-4, int max_iter = 5000,
                         double lr = 0.1);

// Regularized objective logreg_train minimizes.
double logreg_loss(const LogRegModel& model, const datasets::Dataset& d, double l2);

// sigmoid(w.x + b) thresholded at 0.5 (ties go to class 1).
double logreg_accuracy(const LogRegModel& model, const datasets::Dataset& d);

}  // namespace qarch::baselines
