#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qarch/classifier.hpp"
#include "qarch/config.hpp"
#include "qarch/experiment.hpp"

namespace {

namespace fs = std::filesystem;
using qarch::cli::ExperimentConfig;

std::vector<std::uint64_t> pick_seeds(const ExperimentConfig& cfg, bool seed_set,
                                      std::uint64_t seed, const std::string& seeds_csv) {
    if (!seeds_csv.empty()) {
        std::vector<std::uint64_t> out;
        std::stringstream ss(seeds_csv);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) throw CLI::ValidationError("--seeds", "empty entry in seed list");
            out.push_back(std::stoull(item));
        }
        return out;
    }
    if (seed_set) return {seed};
    return cfg.seeds;
}

int cmd_run(const std::string& config_path, bool seed_set, std::uint64_t seed,
            const std::string& seeds_csv, const std::string& out) {
    const ExperimentConfig cfg = qarch::cli::parse_config_file(config_path);
    cfg.validate();
    const fs::path out_root = qarch::cli::resolve_out_root(cfg, out);
    for (std::uint64_t s : pick_seeds(cfg, seed_set, seed, seeds_csv)) {
        const fs::path run_dir = qarch::cli::run_experiment(cfg, s, out_root);
        std::printf("run complete: %s\n", run_dir.string().c_str());
    }
    return 0;
}

int cmd_plot(const std::string& run_dir) {
    qarch::cli::emit_plots(run_dir);
    std::printf("plots written to %s\n", run_dir.c_str());
    return 0;
}

int cmd_export_circuit(const std::string& run_dir, const std::string& to) {
    const fs::path src = fs::path(run_dir) / "best_circuit.txt";
    if (!fs::exists(src)) throw std::runtime_error("no best_circuit.txt in " + run_dir);
    // parse to validate before handing the file on
    qarch::vqc::read_circuit(src);
    if (to.empty()) {
        std::ifstream in(src);
        std::cout << in.rdbuf();
    } else {
        fs::copy_file(src, to, fs::copy_options::overwrite_existing);
        std::printf("circuit written to %s\n", to.c_str());
    }
    return 0;
}

int cmd_baseline(const std::string& config_path, bool seed_set, std::uint64_t seed,
                 const std::string& seeds_csv, const std::string& out) {
    const ExperimentConfig cfg = qarch::cli::parse_config_file(config_path);
    cfg.validate();
    const fs::path out_root = qarch::cli::resolve_out_root(cfg, out);
    for (std::uint64_t s : pick_seeds(cfg, seed_set, seed, seeds_csv)) {
        const double acc = qarch::cli::run_baseline(cfg, s, out_root);
        std::printf("logreg %s seed %llu test accuracy %.6f\n", cfg.dataset.c_str(),
                    static_cast<unsigned long long>(s), acc);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum circuit architecture search"};
    app.require_subcommand(1);

    std::string config_path, run_dir, out, seeds_csv, to;
    std::uint64_t seed = 0;

    CLI::App* run = app.add_subcommand("run", "run a search experiment from a config file");
    run->add_option("config", config_path, "config file")->required();
    CLI::Option* run_seed = run->add_option("--seed", seed, "override the config seed");
    run->add_option("--seeds", seeds_csv, "comma-separated seed list, one run per seed");
    run->add_option("--out", out, "output root directory");

    CLI::App* plot = app.add_subcommand("plot", "re-render plots for an existing run");
    plot->add_option("run_dir", run_dir, "run directory")->required();

    CLI::App* exp = app.add_subcommand("export-circuit", "print or copy a run's best circuit");
    exp->add_option("run_dir", run_dir, "run directory")->required();
    exp->add_option("--to", to, "destination file (default: stdout)");

    CLI::App* base = app.add_subcommand("baseline", "logistic-regression baseline on the config's dataset");
    base->add_option("config", config_path, "config file")->required();
    CLI::Option* base_seed = base->add_option("--seed", seed, "override the config seed");
    base->add_option("--seeds", seeds_csv, "comma-separated seed list");
    base->add_option("--out", out, "output root directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, run_seed->count() > 0, seed, seeds_csv, out);
        if (plot->parsed()) return cmd_plot(run_dir);
        if (exp->parsed()) return cmd_export_circuit(run_dir, to);
        if (base->parsed()) return cmd_baseline(config_path, base_seed->count() > 0, seed, seeds_csv, out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
