#include "qarch/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "qarch/agent.hpp"
#include "qarch/classifier.hpp"
#include "qarch/env.hpp"
#include "qarch/logreg.hpp"
#include "qarch/svg.hpp"

namespace qarch::cli {

namespace {

struct TraceRow {
    int episode;
    int step;
    int action_index;
    double accuracy;
    double reward;
    bool done;
};

std::string run_name(const ExperimentConfig& cfg, std::uint64_t seed) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s-%s-%03d-seed%llu", cfg.dataset.c_str(),
                  cfg.adaptive ? "adaptive" : "fixed",
                  static_cast<int>(std::llround(cfg.y_target * 100.0)),
                  static_cast<unsigned long long>(seed));
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path, bool append = false) {
    std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void append_report(const std::filesystem::path& out_root, const std::string& label,
                   const std::string& dataset, std::uint64_t seed, double accuracy, int parameters,
                   int gates) {
    const std::filesystem::path path = out_root / "report.csv";
    const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    std::ofstream out = open_out(path, true);
    if (fresh) out << "label,dataset,seed,accuracy,parameters,gates\n";
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s,%s,%llu,%.6f,%d,%d\n", label.c_str(), dataset.c_str(),
                  static_cast<unsigned long long>(seed), accuracy, parameters, gates);
    out << buf;
}

void write_traces(const std::filesystem::path& path, std::span<const TraceRow> rows) {
    std::ofstream out = open_out(path);
    out << "episode,step,action_index,y_l,reward,done\n";
    char buf[128];
    for (const TraceRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.6f,%.6f,%d\n", r.episode, r.step, r.action_index,
                      r.accuracy, r.reward, r.done ? 1 : 0);
        out << buf;
    }
}

std::vector<double> column(std::span<const EpisodeRecord> recs, double (*get)(const EpisodeRecord&)) {
    std::vector<double> out;
    out.reserve(recs.size());
    for (const EpisodeRecord& r : recs) out.push_back(get(r));
    return out;
}

}  // namespace

std::vector<double> moving_average(std::span<const double> series, int window) {
    if (window < 1) throw std::invalid_argument("moving_average window must be positive");
    std::vector<double> out(series.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        sum += series[i];
        if (i >= static_cast<std::size_t>(window)) sum -= series[i - static_cast<std::size_t>(window)];
        const std::size_t n = std::min<std::size_t>(i + 1, static_cast<std::size_t>(window));
        out[i] = sum / static_cast<double>(n);
    }
    return out;
}

RunSeeds derive_seeds(std::uint64_t run_seed) {
    SplitMix64 sm(run_seed);
    RunSeeds s{};
    s.dataset = sm.next();
    s.split = sm.next();
    s.agent = sm.next();
    return s;
}

std::pair<datasets::Dataset, datasets::Dataset> build_dataset(const ExperimentConfig& cfg,
                                                              std::uint64_t run_seed) {
    const RunSeeds seeds = derive_seeds(run_seed);
    datasets::Dataset d =
        cfg.dataset == "moons"
            ? datasets::make_moons(cfg.n_samples, cfg.noise_std, seeds.dataset)
            : datasets::make_classification(cfg.n_samples, cfg.n_features, cfg.n_informative,
                                            cfg.class_sep, seeds.dataset);
    return datasets::train_test_split(d, cfg.test_fraction, seeds.split);
}

void write_episode_csv(const std::filesystem::path& path, std::span<const EpisodeRecord> records) {
    std::ofstream out = open_out(path);
    out << "episode,phase,accuracy,gates,reward,y_target,epsilon\n";
    char buf[160];
    for (const EpisodeRecord& r : records) {
        std::snprintf(buf, sizeof(buf), "%d,%s,%.6f,%d,%.6f,%.6f,%.6f\n", r.episode, r.phase.c_str(),
                      r.accuracy, r.gates, r.reward, r.y_target, r.epsilon);
        out << buf;
    }
}

std::vector<EpisodeRecord> read_episode_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "episode,phase,accuracy,gates,reward,y_target,epsilon")
        throw std::runtime_error("bad episodes.csv header in " + path.string());
    std::vector<EpisodeRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        EpisodeRecord r;
        std::string field;
        auto next = [&](const char* what) {
            if (!std::getline(ss, field, ','))
                throw std::runtime_error(std::string("episodes.csv row missing ") + what);
            return field;
        };
        r.episode = std::atoi(next("episode").c_str());
        r.phase = next("phase");
        r.accuracy = std::atof(next("accuracy").c_str());
        r.gates = std::atoi(next("gates").c_str());
        r.reward = std::atof(next("reward").c_str());
        r.y_target = std::atof(next("y_target").c_str());
        r.epsilon = std::atof(next("epsilon").c_str());
        out.push_back(std::move(r));
    }
    return out;
}

std::filesystem::path resolve_out_root(const ExperimentConfig& cfg, const std::string& cli_out) {
    if (!cli_out.empty()) return cli_out;
    if (!cfg.out_dir.empty()) return cfg.out_dir;
    if (const char* env = std::getenv("QARCH_OUT"); env != nullptr && *env != '\0') return env;
    return "runs";
}

std::filesystem::path run_experiment(const ExperimentConfig& cfg, std::uint64_t seed,
                                     const std::filesystem::path& out_root) {
    cfg.validate();
    const std::filesystem::path run_dir = out_root / run_name(cfg, seed);
    std::filesystem::create_directories(run_dir);

    ExperimentConfig snapshot = cfg;
    snapshot.seeds = {seed};
    open_out(run_dir / "config.cfg") << serialize_config(snapshot);

    auto [train, test] = build_dataset(cfg, seed);
    datasets::write_csv(train, run_dir / "train.csv");
    datasets::write_csv(test, run_dir / "test.csv");

    env::EnvConfig ec;
    ec.n_qubits = cfg.n_qubits;
    ec.max_gates = cfg.max_gates;
    ec.y_target = cfg.y_target;
    ec.max_epochs = cfg.max_epochs_per_step;
    ec.classifier_lr = cfg.classifier_lr;
    env::QasEnv env(ec, train, test);

    agent::AgentConfig ac;
    ac.obs_dim = env.observation_size();
    ac.n_actions = static_cast<int>(env.actions().size());
    ac.hidden_sizes = cfg.hidden_sizes;
    ac.leaky_slope = cfg.leaky_slope;
    ac.dropout_p = cfg.dropout;
    ac.q_lr = cfg.q_lr;
    ac.gamma = cfg.effective_gamma();
    ac.n_step = cfg.n_step;
    ac.batch_size = cfg.batch_size;
    ac.sync_interval = cfg.sync_interval;
    ac.buffer_capacity = cfg.buffer_capacity;
    ac.epsilon_start = cfg.epsilon_start;
    ac.epsilon_end = cfg.epsilon_end;
    ac.epsilon_decay_steps = cfg.epsilon_decay_steps;
    agent::DqnAgent agent(ac, derive_seeds(seed).agent);

    agent::AdaptiveConfig adc;
    adc.window = cfg.adaptive_window;
    adc.needed = cfg.adaptive_needed;
    adc.test_streak = cfg.adaptive_test_streak;
    adc.increment = cfg.adaptive_increment;
    adc.y_target_cap = cfg.y_target_cap;
    adc.epsilon_cut = cfg.epsilon_cut;
    agent::AdaptiveState adaptive;
    adaptive.y_target = cfg.y_target;
    adaptive.epsilon = agent.epsilon();

    std::vector<EpisodeRecord> records;
    std::vector<TraceRow> traces;
    const vqc::EmbeddedDataset test_embedded = vqc::EmbeddedDataset::from(test, cfg.n_qubits);

    vqc::CircuitSpec best_circuit;
    double best_accuracy = -1.0;
    int best_gates = 0, best_episode = 0;
    bool best_from_test = false;
    auto consider_best = [&](double acc, int gates, int episode, bool is_test) {
        // test-episode circuits take precedence; train circuits only fill in
        // when no test episode ever ran
        if (best_from_test && !is_test) return;
        const bool phase_upgrade = is_test && !best_from_test;
        const bool better = acc > best_accuracy + 1e-12 ||
                            (std::abs(acc - best_accuracy) <= 1e-12 && gates < best_gates);
        if (phase_upgrade || better) {
            best_circuit = env.circuit();
            best_accuracy = acc;
            best_gates = gates;
            best_episode = episode;
            best_from_test = is_test;
        }
    };

    auto run_episode = [&](int episode, bool is_test) {
        std::vector<double> obs = env.reset();
        double total_reward = 0.0;
        env::StepResult sr;
        int step = 0;
        while (!env.done()) {
            const double eps = is_test ? 0.0 : agent.epsilon();
            const int action = is_test ? agent.act_greedy(obs) : agent.act(obs, eps);
            sr = env.step(action);
            ++step;
            total_reward += sr.reward;
            if (!is_test) {
                agent.observe(agent::Transition{.state = std::move(obs),
                                                .action = action,
                                                .reward = sr.reward,
                                                .next_state = sr.observation,
                                                .done = sr.done,
                                                .episode_id = static_cast<std::uint64_t>(episode)});
                if (agent.buffer().size() >= cfg.learn_start) agent.learn();
                if (cfg.write_traces)
                    traces.push_back(TraceRow{episode, step, action, sr.accuracy, sr.reward, sr.done});
            }
            obs = std::move(sr.observation);
        }
        EpisodeRecord rec;
        rec.episode = episode;
        rec.phase = is_test ? "test" : "train";
        rec.accuracy = sr.accuracy;
        rec.gates = sr.gate_count;
        rec.reward = total_reward;
        rec.y_target = sr.y_target;
        rec.epsilon = is_test ? 0.0 : agent.epsilon();
        records.push_back(rec);
        consider_best(sr.accuracy, sr.gate_count, episode, is_test);
        return sr;
    };

    auto apply_adaptive = [&](agent::Phase phase, const env::StepResult& sr) {
        if (!cfg.adaptive) return;
        adaptive.epsilon = agent.epsilon();
        const agent::EpisodeOutcome outcome{sr.accuracy, sr.accuracy >= sr.y_target};
        adaptive = agent::adaptive_update(adaptive, phase, outcome, adc);
        env.set_y_target(adaptive.y_target);
        agent.set_epsilon_scale(adaptive.epsilon_scale);
    };

    for (int ep = 1; ep <= cfg.episodes; ++ep) {
        const env::StepResult train_sr = run_episode(ep, false);
        apply_adaptive(agent::Phase::Train, train_sr);
        if (ep % cfg.test_interval == 0) {
            const env::StepResult test_sr = run_episode(ep, true);
            apply_adaptive(agent::Phase::Test, test_sr);
            std::printf("[seed %llu] episode %d test accuracy %.4f gates %d y_target %.3f\n",
                        static_cast<unsigned long long>(seed), ep, test_sr.accuracy,
                        test_sr.gate_count, env.y_target());
            std::fflush(stdout);
        }
    }

    write_episode_csv(run_dir / "episodes.csv", records);
    if (cfg.write_traces) write_traces(run_dir / "traces.csv", traces);

    {
        std::ofstream out = open_out(run_dir / "checkpoint.txt");
        out << "episodes_done " << cfg.episodes << '\n';
        agent.save(out);
        agent::save_adaptive(out, adaptive);
    }

    if (best_accuracy >= 0.0) {
        vqc::write_circuit(best_circuit, run_dir / "best_circuit.txt");
        const vqc::CircuitSpec reloaded = vqc::read_circuit(run_dir / "best_circuit.txt");
        const double reloaded_accuracy = vqc::evaluate_accuracy(reloaded, test_embedded);
        {
            std::ofstream out = open_out(run_dir / "best.txt");
            char buf[256];
            std::snprintf(buf, sizeof(buf),
                          "episode %d\nphase %s\ngates %d\nparameters %d\naccuracy %.12f\n"
                          "search_accuracy %.12f\n",
                          best_episode, best_from_test ? "test" : "train", best_gates,
                          reloaded.n_params(), reloaded_accuracy, best_accuracy);
            out << buf;
        }
        append_report(out_root, "quantum", cfg.dataset, seed, reloaded_accuracy,
                      best_circuit.n_params(), best_gates);
    }

    emit_plots(run_dir);
    return run_dir;
}

void emit_plots(const std::filesystem::path& run_dir) {
    const ExperimentConfig cfg = parse_config_file(run_dir / "config.cfg");
    const std::vector<EpisodeRecord> records = read_episode_csv(run_dir / "episodes.csv");
    if (records.empty()) throw std::runtime_error("episodes.csv has no records; nothing to plot");

    std::vector<EpisodeRecord> train, test;
    for (const EpisodeRecord& r : records) (r.phase == "test" ? test : train).push_back(r);

    auto emit_phase = [&](const std::vector<EpisodeRecord>& recs, const std::string& phase,
                          int window) {
        if (recs.empty()) return;
        std::vector<double> x;
        x.reserve(recs.size());
        for (std::size_t i = 0; i < recs.size(); ++i) x.push_back(static_cast<double>(i + 1));
        const std::string ma = " (" + std::to_string(window) + "-episode moving average)";

        auto chart = [&](const std::string& metric, double (*get)(const EpisodeRecord&),
                         bool overlay_target) {
            std::vector<Series> series;
            series.push_back(Series{metric, "", x, moving_average(column(recs, get), window)});
            if (overlay_target)
                series.push_back(Series{"y_target", "", x,
                                        column(recs, [](const EpisodeRecord& r) { return r.y_target; })});
            const std::string svg =
                render_line_chart(phase + " " + metric + ma, phase + " episode", metric, series);
            open_out(run_dir / (phase + "_" + metric + ".svg")) << svg;
        };
        chart("accuracy", [](const EpisodeRecord& r) { return r.accuracy; },
              cfg.adaptive && phase == "train");
        chart("gates", [](const EpisodeRecord& r) { return static_cast<double>(r.gates); }, false);
        chart("reward", [](const EpisodeRecord& r) { return r.reward; }, false);
    };
    emit_phase(train, "train", cfg.smooth_train);
    emit_phase(test, "test", cfg.smooth_test);
}

double run_baseline(const ExperimentConfig& cfg, std::uint64_t seed,
                    const std::filesystem::path& out_root) {
    cfg.validate();
    std::filesystem::create_directories(out_root);
    auto [train, test] = build_dataset(cfg, seed);
    const baselines::LogRegModel model = baselines::logreg_train(train);
    const double accuracy = baselines::logreg_accuracy(model, test);
    append_report(out_root, "logreg", cfg.dataset, seed, accuracy, cfg.n_features + 1, 0);
    return accuracy;
}

}  // namespace qarch::cli
