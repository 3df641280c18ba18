#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "qarch/config.hpp"
#include "qarch/datasets.hpp"

namespace qarch::cli {

struct EpisodeRecord {
    int episode = 0;
    std::string phase;  // "train" | "test"
    double accuracy = 0.0;
    int gates = 0;
    double reward = 0.0;  // summed over the episode
    double y_target = 0.0;
    double epsilon = 0.0;
};

// Trailing mean over min(window, points so far); output length == input.
std::vector<double> moving_average(std::span<const double> series, int window);

// Seeds for the independent random streams of one run, all derived from the
// run seed so the whole experiment reproduces from a single integer.
struct RunSeeds {
    std::uint64_t dataset;
    std::uint64_t split;
    std::uint64_t agent;
};
RunSeeds derive_seeds(std::uint64_t run_seed);

// The generator + split a config describes, fixed by the run seed.
std::pair<datasets::Dataset, datasets::Dataset> build_dataset(const ExperimentConfig& cfg,
                                                              std::uint64_t run_seed);

// Full search run: train episodes with learning, a greedy test episode every
// test_interval, optional adaptive target updates. Writes config.cfg,
// episodes.csv, traces.csv, best_circuit.txt, best.txt, checkpoint.txt,
// report.csv (appended in out_root) and the six plots. Returns the run
// directory.
std::filesystem::path run_experiment(const ExperimentConfig& cfg, std::uint64_t seed,
                                     const std::filesystem::path& out_root);

// Renders the six charts from an existing run directory.
void emit_plots(const std::filesystem::path& run_dir);

// Logistic-regression baseline on the same dataset/split derivation; appends
// to report.csv in out_root and returns the test accuracy.
double run_baseline(const ExperimentConfig& cfg, std::uint64_t seed,
                    const std::filesystem::path& out_root);

void write_episode_csv(const std::filesystem::path& path, std::span<const EpisodeRecord> records);
std::vector<EpisodeRecord> read_episode_csv(const std::filesystem::path& path);

// Precedence: explicit CLI --out, config out_dir, $QARCH_OUT, "runs".
std::filesystem::path resolve_out_root(const ExperimentConfig& cfg, const std::string& cli_out);

}  // namespace qarch::cli
