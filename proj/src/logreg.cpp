#include "qarch/logreg.hpp"

#include <cmath>
#include <stdexcept>

namespace qarch::baselines {

namespace {

double decision(const LogRegModel& m, std::span<const double> x) {
    double z = m.intercept;
    for (std::size_t i = 0; i < x.size(); ++i) z += m.coefficients[i] * x[i];
    return z;
}

// log(1 + e^z) - y z, computed without overflow.
double bce_from_logit(double z, int y) {
    const double softplus = std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
    return softplus - static_cast<double>(y) * z;
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

void check_dims(const LogRegModel& m, const datasets::Dataset& d) {
    if (static_cast<int>(m.coefficients.size()) != d.n_features)
        throw std::invalid_argument("logreg model dimension does not match dataset");
    if (d.size() == 0) throw std::invalid_argument("empty dataset");
}

}  // namespace

double logreg_loss(const LogRegModel& model, const datasets::Dataset& d, double l2) {
    check_dims(model, d);
    double total = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
        total += bce_from_logit(decision(model, d.row(i)), d.labels[i]);
    double reg = 0.0;
    for (double w : model.coefficients) reg += w * w;
    return total / static_cast<double>(d.size()) + 0.5 * l2 * reg;
}

LogRegModel logreg_train(const datasets::Dataset& train, double l2, int max_iter, double lr) {
    if (train.size() == 0) throw std::invalid_argument("empty dataset");
    bool has0 = false, has1 = false;
    for (int y : train.labels) (y == 0 ? has0 : has1) = true;
    if (!has0 || !has1) throw std::invalid_argument("logreg_train needs both classes present");

    LogRegModel m;
    m.coefficients.assign(static_cast<std::size_t>(train.n_features), 0.0);
    const double n = static_cast<double>(train.size());
    std::vector<double> gw(m.coefficients.size());
    double loss = logreg_loss(m, train, l2);

    for (int iter = 0; iter < max_iter; ++iter) {
        std::fill(gw.begin(), gw.end(), 0.0);
        double gb = 0.0;
        for (std::size_t i = 0; i < train.size(); ++i) {
            const std::span<const double> x = train.row(i);
            const double err = sigmoid(decision(m, x)) - static_cast<double>(train.labels[i]);
            for (std::size_t j = 0; j < gw.size(); ++j) gw[j] += err * x[j];
            gb += err;
        }
        double norm_sq = gb * gb / (n * n);
        for (std::size_t j = 0; j < gw.size(); ++j) {
            gw[j] = gw[j] / n + l2 * m.coefficients[j];
            norm_sq += gw[j] * gw[j];
        }
        gb /= n;
        if (std::sqrt(norm_sq) < 1e-6) break;

        double step = lr;
        for (int backoff = 0; backoff < 40; ++backoff) {
            LogRegModel cand = m;
            for (std::size_t j = 0; j < gw.size(); ++j) cand.coefficients[j] -= step * gw[j];
            cand.intercept -= step * gb;
            const double cand_loss = logreg_loss(cand, train, l2);
            if (cand_loss <= loss) {
                m = std::move(cand);
                loss = cand_loss;
                break;
            }
            step *= 0.5;
        }
    }
    return m;
}

double logreg_accuracy(const LogRegModel& model, const datasets::Dataset& d) {
    check_dims(model, d);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const int pred = sigmoid(decision(model, d.row(i))) >= 0.5 ? 1 : 0;
        if (pred == d.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(d.size());
}

}  // namespace qarch::baselines
