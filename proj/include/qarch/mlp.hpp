#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "qarch/adam.hpp"
#include "qarch/rng.hpp"

namespace qarch::nn {

struct MlpConfig {
    std::vector<int> layer_sizes;  // input, hidden..., output
    double leaky_slope = 0.01;
    double dropout_p = 0.1;
};

enum class Mode { Training, Inference };

struct Layer {
    int in = 0, out = 0;
    std::vector<double> w;  // row-major, out x in
    std::vector<double> b;
};

// Dense MLP: affine -> LeakyReLU -> dropout per hidden layer, affine output.
// Dropout is inverted (masked activations scaled by 1/(1-p)) and only active
// in Training mode; Inference forwards are bit-deterministic.
class Mlp {
public:
    Mlp(MlpConfig config, Rng& init_rng);

    std::vector<double> forward(std::span<const double> input, Rng* rng = nullptr) const;

    Mode mode() const { return mode_; }
    void set_mode(Mode m) { mode_ = m; }

    // Smooth-L1 over the selected output per sample, mean over the batch.
    // Gradient flows only through the chosen output index of each sample.
    // Dropout masks are drawn from `rng` when dropout_p > 0. Returns the
    // pre-update loss.
    double train_step(Adam& optimizer, const std::vector<std::vector<double>>& inputs,
                      std::span<const int> selected_outputs, std::span<const double> targets,
                      Rng& rng);

    // The loss train_step minimizes, evaluated without dropout. Finite
    // difference oracle hook.
    double selected_loss(const std::vector<std::vector<double>>& inputs,
                         std::span<const int> selected_outputs,
                         std::span<const double> targets) const;

    struct Gradients {
        double loss = 0.0;
        std::vector<std::vector<double>> weights;  // per layer, same layout as Layer::w
        std::vector<std::vector<double>> biases;
    };

    // Backprop of the selected-output Smooth-L1, scaled by 1/batch. Dropout
    // masks are drawn from `rng` only when train_mode is set; with it off the
    // result is the exact gradient of selected_loss.
    Gradients selected_gradients(const std::vector<std::vector<double>>& inputs,
                                 std::span<const int> selected_outputs,
                                 std::span<const double> targets, bool train_mode = false,
                                 Rng* rng = nullptr) const;

    void copy_params_from(const Mlp& src);

    const MlpConfig& config() const { return config_; }
    std::vector<Layer>& layers() { return layers_; }
    const std::vector<Layer>& layers() const { return layers_; }
    int input_size() const { return config_.layer_sizes.front(); }
    int output_size() const { return config_.layer_sizes.back(); }

    void save(std::ostream& os) const;
    static Mlp load(std::istream& is);

private:
    struct Workspace;
    void forward_internal(std::span<const double> input, Workspace& ws, bool train_mode,
                          Rng* rng) const;

    MlpConfig config_;
    std::vector<Layer> layers_;
    Mode mode_ = Mode::Inference;
};

// Mean elementwise Smooth-L1: 0.5 d^2 for |d| < 1, |d| - 0.5 otherwise.
double smooth_l1(std::span<const double> pred, std::span<const double> target);

}  // namespace qarch::nn
