#include "qarch/mlp.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace qarch::nn {

namespace {

double huber(double d) {
    const double ad = std::abs(d);
    return ad < 1.0 ? 0.5 * d * d : ad - 0.5;
}

double huber_grad(double d) {
    if (d > 1.0) return 1.0;
    if (d < -1.0) return -1.0;
    return d;
}

// y = W x + b with four running sums to keep the FP reduction order fixed
// while giving the compiler room to pipeline.
void affine(const Layer& layer, std::span<const double> x, std::vector<double>& y) {
    y.resize(static_cast<std::size_t>(layer.out));
    const double* w = layer.w.data();
    const std::size_t in = static_cast<std::size_t>(layer.in);
    for (int r = 0; r < layer.out; ++r) {
        const double* row = w + static_cast<std::size_t>(r) * in;
        double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
        std::size_t i = 0;
        for (; i + 4 <= in; i += 4) {
            s0 += row[i] * x[i];
            s1 += row[i + 1] * x[i + 1];
            s2 += row[i + 2] * x[i + 2];
            s3 += row[i + 3] * x[i + 3];
        }
        for (; i < in; ++i) s0 += row[i] * x[i];
        y[static_cast<std::size_t>(r)] = (s0 + s1) + (s2 + s3) + layer.b[static_cast<std::size_t>(r)];
    }
}

}  // namespace

struct Mlp::Workspace {
    std::vector<std::vector<double>> acts;   // acts[0] = input, acts[l+1] = layer l output
    std::vector<std::vector<double>> zs;     // pre-activations per layer
    std::vector<std::vector<double>> masks;  // dropout scale per hidden layer (empty when off)
};

Mlp::Mlp(MlpConfig config, Rng& init_rng) : config_(std::move(config)) {
    if (config_.layer_sizes.size() < 2) throw std::invalid_argument("mlp needs at least input and output sizes");
    for (int s : config_.layer_sizes)
        if (s < 1) throw std::invalid_argument("mlp layer sizes must be positive");
    if (config_.dropout_p < 0.0 || config_.dropout_p >= 1.0)
        throw std::invalid_argument("dropout_p must be in [0, 1)");
    const std::size_t n_layers = config_.layer_sizes.size() - 1;
    layers_.resize(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l) {
        Layer& layer = layers_[l];
        layer.in = config_.layer_sizes[l];
        layer.out = config_.layer_sizes[l + 1];
        layer.w.resize(static_cast<std::size_t>(layer.in) * static_cast<std::size_t>(layer.out));
        layer.b.assign(static_cast<std::size_t>(layer.out), 0.0);
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
        for (double& w : layer.w) w = init_rng.uniform(-bound, bound);
    }
}

void Mlp::forward_internal(std::span<const double> input, Workspace& ws, bool train_mode,
                           Rng* rng) const {
    if (static_cast<int>(input.size()) != input_size())
        throw std::invalid_argument("mlp input size mismatch");
    const std::size_t n_layers = layers_.size();
    ws.acts.resize(n_layers + 1);
    ws.zs.resize(n_layers);
    ws.masks.assign(n_layers, {});
    ws.acts[0].assign(input.begin(), input.end());
    const bool dropout = train_mode && config_.dropout_p > 0.0;
    if (dropout && rng == nullptr) throw std::invalid_argument("training-mode forward needs an rng for dropout");
    const double keep = 1.0 - config_.dropout_p;
    for (std::size_t l = 0; l < n_layers; ++l) {
        affine(layers_[l], ws.acts[l], ws.zs[l]);
        if (l + 1 == n_layers) {
            ws.acts[l + 1] = ws.zs[l];
            break;
        }
        std::vector<double>& a = ws.acts[l + 1];
        a = ws.zs[l];
        for (double& v : a)
            if (v < 0.0) v *= config_.leaky_slope;
        if (dropout) {
            std::vector<double>& mask = ws.masks[l];
            mask.resize(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                mask[i] = rng->uniform() < keep ? 1.0 / keep : 0.0;
                a[i] *= mask[i];
            }
        }
    }
}

std::vector<double> Mlp::forward(std::span<const double> input, Rng* rng) const {
    Workspace ws;
    forward_internal(input, ws, mode_ == Mode::Training, rng);
    return ws.acts.back();
}

double Mlp::selected_loss(const std::vector<std::vector<double>>& inputs,
                          std::span<const int> selected_outputs,
                          std::span<const double> targets) const {
    if (inputs.size() != selected_outputs.size() || inputs.size() != targets.size())
        throw std::invalid_argument("batch size mismatch");
    if (inputs.empty()) throw std::invalid_argument("empty batch");
    Workspace ws;
    double total = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        forward_internal(inputs[i], ws, false, nullptr);
        const int sel = selected_outputs[i];
        if (sel < 0 || sel >= output_size()) throw std::out_of_range("selected output out of range");
        total += huber(ws.acts.back()[static_cast<std::size_t>(sel)] - targets[i]);
    }
    return total / static_cast<double>(inputs.size());
}

Mlp::Gradients Mlp::selected_gradients(const std::vector<std::vector<double>>& inputs,
                                       std::span<const int> selected_outputs,
                                       std::span<const double> targets, bool train_mode,
                                       Rng* rng) const {
    if (inputs.size() != selected_outputs.size() || inputs.size() != targets.size())
        throw std::invalid_argument("batch size mismatch");
    if (inputs.empty()) throw std::invalid_argument("empty batch");
    const std::size_t n_layers = layers_.size();
    const double batch = static_cast<double>(inputs.size());

    Gradients out;
    out.weights.resize(n_layers);
    out.biases.resize(n_layers);
    std::vector<std::vector<double>>& gw = out.weights;
    std::vector<std::vector<double>>& gb = out.biases;
    for (std::size_t l = 0; l < n_layers; ++l) {
        gw[l].assign(layers_[l].w.size(), 0.0);
        gb[l].assign(layers_[l].b.size(), 0.0);
    }

    Workspace ws;
    std::vector<double> delta, delta_prev;
    double total_loss = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        forward_internal(inputs[i], ws, train_mode, rng);
        const int sel = selected_outputs[i];
        if (sel < 0 || sel >= output_size()) throw std::out_of_range("selected output out of range");
        const double d = ws.acts.back()[static_cast<std::size_t>(sel)] - targets[i];
        total_loss += huber(d);

        delta.assign(static_cast<std::size_t>(output_size()), 0.0);
        delta[static_cast<std::size_t>(sel)] = huber_grad(d) / batch;
        for (std::size_t l = n_layers; l-- > 0;) {
            const Layer& layer = layers_[l];
            const std::vector<double>& a_in = ws.acts[l];
            double* gwl = gw[l].data();
            for (int r = 0; r < layer.out; ++r) {
                const double dr = delta[static_cast<std::size_t>(r)];
                if (dr == 0.0) continue;
                gb[l][static_cast<std::size_t>(r)] += dr;
                double* grow = gwl + static_cast<std::size_t>(r) * static_cast<std::size_t>(layer.in);
                for (int c = 0; c < layer.in; ++c) grow[static_cast<std::size_t>(c)] += dr * a_in[static_cast<std::size_t>(c)];
            }
            if (l == 0) break;
            delta_prev.assign(static_cast<std::size_t>(layer.in), 0.0);
            const double* w = layer.w.data();
            for (int r = 0; r < layer.out; ++r) {
                const double dr = delta[static_cast<std::size_t>(r)];
                if (dr == 0.0) continue;
                const double* row = w + static_cast<std::size_t>(r) * static_cast<std::size_t>(layer.in);
                for (int c = 0; c < layer.in; ++c) delta_prev[static_cast<std::size_t>(c)] += dr * row[static_cast<std::size_t>(c)];
            }
            const std::vector<double>& z = ws.zs[l - 1];
            const std::vector<double>& mask = ws.masks[l - 1];
            for (std::size_t c = 0; c < delta_prev.size(); ++c) {
                if (!mask.empty()) delta_prev[c] *= mask[c];
                if (z[c] < 0.0) delta_prev[c] *= config_.leaky_slope;
            }
            delta.swap(delta_prev);
        }
    }
    out.loss = total_loss / batch;
    return out;
}

double Mlp::train_step(Adam& optimizer, const std::vector<std::vector<double>>& inputs,
                       std::span<const int> selected_outputs, std::span<const double> targets,
                       Rng& rng) {
    const Gradients g = selected_gradients(inputs, selected_outputs, targets, true, &rng);

    std::vector<std::span<double>> params;
    std::vector<std::span<const double>> grads;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        params.emplace_back(layers_[l].w);
        grads.emplace_back(g.weights[l]);
        params.emplace_back(layers_[l].b);
        grads.emplace_back(g.biases[l]);
    }
    optimizer.step(params, grads);
    return g.loss;
}

void Mlp::copy_params_from(const Mlp& src) {
    if (src.config_.layer_sizes != config_.layer_sizes)
        throw std::invalid_argument("cannot copy parameters between different architectures");
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        layers_[l].w = src.layers_[l].w;
        layers_[l].b = src.layers_[l].b;
    }
}

void Mlp::save(std::ostream& os) const {
    os.precision(17);
    os << "mlp 1\n";
    os << "sizes " << config_.layer_sizes.size();
    for (int s : config_.layer_sizes) os << ' ' << s;
    os << '\n';
    os << "slope " << config_.leaky_slope << '\n';
    os << "dropout " << config_.dropout_p << '\n';
    for (const Layer& layer : layers_) {
        for (double v : layer.w) os << v << '\n';
        for (double v : layer.b) os << v << '\n';
    }
}

Mlp Mlp::load(std::istream& is) {
    std::string tag;
    int version = 0;
    is >> tag >> version;
    if (!is || tag != "mlp" || version != 1) throw std::runtime_error("bad mlp checkpoint header");
    std::size_t n_sizes = 0;
    is >> tag >> n_sizes;
    if (!is || tag != "sizes" || n_sizes < 2 || n_sizes > 64) throw std::runtime_error("bad mlp checkpoint sizes");
    MlpConfig cfg;
    cfg.layer_sizes.resize(n_sizes);
    for (int& s : cfg.layer_sizes) is >> s;
    is >> tag >> cfg.leaky_slope;
    if (!is || tag != "slope") throw std::runtime_error("bad mlp checkpoint slope");
    is >> tag >> cfg.dropout_p;
    if (!is || tag != "dropout") throw std::runtime_error("bad mlp checkpoint dropout");
    Rng scratch(0);
    Mlp net(cfg, scratch);
    for (Layer& layer : net.layers_) {
        for (double& v : layer.w) is >> v;
        for (double& v : layer.b) is >> v;
    }
    if (!is) throw std::runtime_error("truncated mlp checkpoint");
    return net;
}

double smooth_l1(std::span<const double> pred, std::span<const double> target) {
    if (pred.size() != target.size()) throw std::invalid_argument("smooth_l1 size mismatch");
    if (pred.empty()) throw std::invalid_argument("smooth_l1 on empty span");
    double total = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) total += huber(pred[i] - target[i]);
    return total / static_cast<double>(pred.size());
}

}  // namespace qarch::nn
