#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qarch::cli {

// Every knob of a search run, flat key=value on disk. Defaults follow the
// four-qubit classification scenario; presets override per scenario.
struct ExperimentConfig {
    // dataset
    std::string dataset = "classification";  // classification | moons
    int n_samples = 400;
    int n_features = 4;
    int n_informative = 2;
    double class_sep = 1.0;
    double noise_std = 0.15;
    double test_fraction = 0.25;

    // circuit search
    int n_qubits = 4;
    int max_gates = 20;
    double y_target = 0.85;
    bool adaptive = false;
    int max_epochs_per_step = 15;
    double classifier_lr = 0.05;

    // episode loop
    int episodes = 800;
    int test_interval = 10;

    // agent
    int n_step = 3;
    double gamma = 0.0;  // 0 selects 0.005^(1/max_gates)
    int batch_size = 64;
    int sync_interval = 512;
    std::uint64_t buffer_capacity = 16384;
    std::uint64_t learn_start = 1000;
    double epsilon_start = 1.0;
    double epsilon_end = 0.1;
    std::uint64_t epsilon_decay_steps = 10000;

    // q-network
    std::vector<int> hidden_sizes = {128, 128};
    double leaky_slope = 0.01;
    double dropout = 0.1;
    double q_lr = 1e-4;

    // adaptive target schedule
    int adaptive_window = 12;
    int adaptive_needed = 10;
    int adaptive_test_streak = 5;
    double adaptive_increment = 0.01;
    double y_target_cap = 0.99;
    double epsilon_cut = 0.95;

    // plotting
    int smooth_train = 40;
    int smooth_test = 4;

    // run
    std::vector<std::uint64_t> seeds = {1};
    bool write_traces = true;
    std::string out_dir;  // empty: $QARCH_OUT, else ./runs

    double effective_gamma() const;
    void validate() const;  // throws std::invalid_argument naming the bad field

    bool operator==(const ExperimentConfig&) const = default;
};

// `key = value` lines; '#' starts a comment; unknown keys are errors.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

// Lossless round trip: parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& c);

}  // namespace qarch::cli
