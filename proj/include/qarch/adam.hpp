#pragma once

#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

namespace qarch {

// Adam (Kingma & Ba). One instance owns the moments for a fixed list of
// parameter tensors, passed in the same order on every step.
class Adam {
public:
    explicit Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void step(std::span<double> params, std::span<const double> grads) {
        std::span<double> p[] = {params};
        std::span<const double> g[] = {grads};
        step(p, g);
    }

    void step(std::span<std::span<double>> params, std::span<std::span<const double>> grads) {
        if (params.size() != grads.size()) {
            throw std::invalid_argument("adam: params/grads tensor count mismatch");
        }
        if (m_.empty()) {
            m_.resize(params.size());
            v_.resize(params.size());
            for (std::size_t i = 0; i < params.size(); ++i) {
                m_[i].assign(params[i].size(), 0.0);
                v_[i].assign(params[i].size(), 0.0);
            }
        }
        ++t_;
        const double bc1 = 1.0 - std::pow(beta1_, t_);
        const double bc2 = 1.0 - std::pow(beta2_, t_);
        for (std::size_t i = 0; i < params.size(); ++i) {
            auto& m = m_[i];
            auto& v = v_[i];
            if (m.size() != params[i].size() || params[i].size() != grads[i].size()) {
                throw std::invalid_argument("adam: tensor size mismatch");
            }
            for (std::size_t j = 0; j < m.size(); ++j) {
                const double g = grads[i][j];
                m[j] = beta1_ * m[j] + (1.0 - beta1_) * g;
                v[j] = beta2_ * v[j] + (1.0 - beta2_) * g * g;
                params[i][j] -= lr_ * (m[j] / bc1) / (std::sqrt(v[j] / bc2) + eps_);
            }
        }
    }

    double lr() const { return lr_; }
    int t() const { return t_; }

    void save(std::ostream& os) const {
        os.precision(17);
        os << lr_ << ' ' << beta1_ << ' ' << beta2_ << ' ' << eps_ << ' ' << t_ << ' '
           << m_.size() << '\n';
        for (std::size_t i = 0; i < m_.size(); ++i) {
            os << m_[i].size() << '\n';
            for (double x : m_[i]) os << x << ' ';
            os << '\n';
            for (double x : v_[i]) os << x << ' ';
            os << '\n';
        }
    }

    void load(std::istream& is) {
        std::size_t tensors = 0;
        if (!(is >> lr_ >> beta1_ >> beta2_ >> eps_ >> t_ >> tensors)) {
            throw std::runtime_error("adam: malformed state");
        }
        m_.assign(tensors, {});
        v_.assign(tensors, {});
        for (std::size_t i = 0; i < tensors; ++i) {
            std::size_t n = 0;
            is >> n;
            m_[i].resize(n);
            v_[i].resize(n);
            for (double& x : m_[i]) is >> x;
            for (double& x : v_[i]) is >> x;
        }
        if (!is) throw std::runtime_error("adam: malformed state");
    }

private:
    double lr_, beta1_, beta2_, eps_;
    int t_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

}  // namespace qarch
