#pragma once

#include <cstdint>
#include <deque>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "qarch/adam.hpp"
#include "qarch/mlp.hpp"
#include "qarch/rng.hpp"

namespace qarch::agent {

struct Transition {
    std::vector<double> state;
    int action = 0;
    double reward = 0.0;
    std::vector<double> next_state;
    bool done = false;
    std::uint64_t episode_id = 0;
};

// Fixed-capacity ring; oldest transitions evicted first. Logical index 0 is
// the oldest stored entry.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition t);
    std::size_t size() const { return count_; }
    std::size_t capacity() const { return capacity_; }
    const Transition& at(std::size_t logical) const;

    // Consecutive run starting at `logical`: same episode, at most max_len
    // entries, cut after a terminal transition and at the newest entry.
    std::vector<const Transition*> slice(std::size_t logical, int max_len) const;

private:
    std::size_t capacity_;
    std::vector<Transition> ring_;
    std::size_t next_ = 0;
    std::size_t count_ = 0;
};

// slice holds >= 1 consecutive transitions of one episode, oldest first,
// already truncated to the n-step horizon.
// target = sum_k gamma^k r_k, plus gamma^K * Q_target(s_K, argmax_a Q_policy)
// when the slice does not end at a terminal transition.
double nstep_target(std::span<const Transition* const> slice, const nn::Mlp& policy,
                    const nn::Mlp& target_net, double gamma);

std::vector<double> compute_nstep_targets(const std::vector<std::vector<const Transition*>>& slices,
                                          const nn::Mlp& policy, const nn::Mlp& target_net,
                                          double gamma);

// Epsilon-greedy over the net's Q outputs; ties break to the lowest index.
int select_action(const nn::Mlp& net, std::span<const double> observation, double epsilon,
                  Rng& rng);

// Linear decay start -> end over decay_steps, then flat.
double epsilon_schedule(std::uint64_t step, double start = 1.0, double end = 0.1,
                        std::uint64_t decay_steps = 10000);

struct AgentConfig {
    int obs_dim = 0;
    int n_actions = 0;
    std::vector<int> hidden_sizes = {128, 128};
    double leaky_slope = 0.01;
    double dropout_p = 0.1;
    double q_lr = 1e-4;
    double gamma = 0.8;
    int n_step = 3;
    int batch_size = 64;
    int sync_interval = 512;
    std::size_t buffer_capacity = 16384;
    double epsilon_start = 1.0;
    double epsilon_end = 0.1;
    std::uint64_t epsilon_decay_steps = 10000;
};

class DqnAgent {
public:
    DqnAgent(AgentConfig config, std::uint64_t seed);

    int act(std::span<const double> observation, double epsilon);
    int act_greedy(std::span<const double> observation) const;

    // Push a training transition and advance the exploration clock.
    void observe(Transition t);

    // One gradient step on a uniform batch of n-step slices. No-op (returns
    // nothing) while the buffer holds fewer than batch_size transitions.
    // Syncs the target net every sync_interval learn calls.
    std::optional<double> learn();

    double epsilon() const;
    void set_epsilon_scale(double scale) { epsilon_scale_ = scale; }
    double epsilon_scale() const { return epsilon_scale_; }

    std::uint64_t env_steps() const { return env_steps_; }
    std::uint64_t learn_steps() const { return learn_steps_; }

    const AgentConfig& config() const { return config_; }
    ReplayBuffer& buffer() { return buffer_; }
    const ReplayBuffer& buffer() const { return buffer_; }
    nn::Mlp& policy() { return policy_; }
    const nn::Mlp& policy() const { return policy_; }
    nn::Mlp& target() { return target_; }
    const nn::Mlp& target() const { return target_; }

    // Nets, optimizer moments, RNG state, step counters, epsilon scale.
    // The replay buffer is rebuilt from fresh experience after a resume.
    void save(std::ostream& os) const;
    void load(std::istream& is);

private:
    AgentConfig config_;
    Rng rng_;
    nn::Mlp policy_;
    nn::Mlp target_;
    Adam optimizer_;
    ReplayBuffer buffer_;
    std::uint64_t env_steps_ = 0;
    std::uint64_t learn_steps_ = 0;
    double epsilon_scale_ = 1.0;
};

enum class Phase { Train, Test };

struct EpisodeOutcome {
    double accuracy = 0.0;
    bool success = false;
};

struct AdaptiveConfig {
    int window = 12;
    int needed = 10;
    int test_streak = 5;
    double increment = 0.01;
    double y_target_cap = 0.99;
    double epsilon_cut = 0.95;
};

struct AdaptiveState {
    double y_target = 0.85;
    double epsilon = 1.0;        // mirror of the agent's current value
    double epsilon_scale = 1.0;  // accumulated multiplicative cuts
    std::deque<bool> train_window;
    int test_streak = 0;
};

// Train episodes feed a sliding success window; enough successes raise the
// target and clear the window. A full streak of successful test episodes
// raises the target and cuts epsilon. y_target never exceeds the cap.
AdaptiveState adaptive_update(AdaptiveState state, Phase phase, const EpisodeOutcome& outcome,
                              const AdaptiveConfig& cfg = {});

void save_adaptive(std::ostream& os, const AdaptiveState& s);
AdaptiveState load_adaptive(std::istream& is);

}  // namespace qarch::agent
