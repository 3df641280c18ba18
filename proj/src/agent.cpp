#include "qarch/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qarch::agent {

namespace {

nn::MlpConfig net_config(const AgentConfig& cfg) {
    nn::MlpConfig net;
    net.layer_sizes.push_back(cfg.obs_dim);
    for (int h : cfg.hidden_sizes) net.layer_sizes.push_back(h);
    net.layer_sizes.push_back(cfg.n_actions);
    net.leaky_slope = cfg.leaky_slope;
    net.dropout_p = cfg.dropout_p;
    return net;
}

int argmax_q(const nn::Mlp& net, std::span<const double> observation) {
    const std::vector<double> q = net.forward(observation);
    int best = 0;
    for (int i = 1; i < static_cast<int>(q.size()); ++i)
        if (q[static_cast<std::size_t>(i)] > q[static_cast<std::size_t>(best)]) best = i;
    return best;
}

void validate(const AgentConfig& cfg) {
    if (cfg.obs_dim < 1) throw std::invalid_argument("obs_dim must be positive");
    if (cfg.n_actions < 1) throw std::invalid_argument("n_actions must be positive");
    if (cfg.n_step < 1) throw std::invalid_argument("n_step must be positive");
    if (cfg.batch_size < 1) throw std::invalid_argument("batch_size must be positive");
    if (cfg.sync_interval < 1) throw std::invalid_argument("sync_interval must be positive");
    if (cfg.buffer_capacity < static_cast<std::size_t>(cfg.batch_size))
        throw std::invalid_argument("buffer_capacity must be at least batch_size");
    if (cfg.gamma <= 0.0 || cfg.gamma > 1.0) throw std::invalid_argument("gamma must be in (0, 1]");
}

}  // namespace

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("replay capacity must be positive");
    ring_.resize(capacity_);
}

void ReplayBuffer::push(Transition t) {
    ring_[next_] = std::move(t);
    next_ = (next_ + 1) % capacity_;
    count_ = std::min(count_ + 1, capacity_);
}

const Transition& ReplayBuffer::at(std::size_t logical) const {
    if (logical >= count_) throw std::out_of_range("replay index out of range");
    const std::size_t phys = (next_ + capacity_ - count_ + logical) % capacity_;
    return ring_[phys];
}

std::vector<const Transition*> ReplayBuffer::slice(std::size_t logical, int max_len) const {
    if (max_len < 1) throw std::invalid_argument("slice length must be positive");
    std::vector<const Transition*> out;
    const Transition* first = &at(logical);
    out.push_back(first);
    for (std::size_t i = logical + 1; i < count_ && static_cast<int>(out.size()) < max_len; ++i) {
        if (out.back()->done) break;
        const Transition& next = at(i);
        if (next.episode_id != first->episode_id) break;
        out.push_back(&next);
    }
    return out;
}

double nstep_target(std::span<const Transition* const> slice, const nn::Mlp& policy,
                    const nn::Mlp& target_net, double gamma) {
    if (slice.empty()) throw std::invalid_argument("empty n-step slice");
    double total = 0.0;
    double discount = 1.0;
    for (const Transition* t : slice) {
        total += discount * t->reward;
        discount *= gamma;
    }
    const Transition* last = slice.back();
    if (!last->done) {
        const int best = argmax_q(policy, last->next_state);
        const std::vector<double> q = target_net.forward(last->next_state);
        total += discount * q[static_cast<std::size_t>(best)];
    }
    return total;
}

std::vector<double> compute_nstep_targets(const std::vector<std::vector<const Transition*>>& slices,
                                          const nn::Mlp& policy, const nn::Mlp& target_net,
                                          double gamma) {
    std::vector<double> out;
    out.reserve(slices.size());
    for (const auto& s : slices) out.push_back(nstep_target(s, policy, target_net, gamma));
    return out;
}

int select_action(const nn::Mlp& net, std::span<const double> observation, double epsilon,
                  Rng& rng) {
    if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon must be in [0, 1]");
    if (epsilon > 0.0 && rng.uniform() < epsilon)
        return static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(net.output_size())));
    return argmax_q(net, observation);
}

double epsilon_schedule(std::uint64_t step, double start, double end, std::uint64_t decay_steps) {
    if (decay_steps == 0 || step >= decay_steps) return end;
    const double frac = static_cast<double>(step) / static_cast<double>(decay_steps);
    return start + (end - start) * frac;
}

DqnAgent::DqnAgent(AgentConfig config, std::uint64_t seed)
    : config_((validate(config), std::move(config))),
      rng_(seed),
      policy_(net_config(config_), rng_),
      target_(net_config(config_), rng_),
      optimizer_(config_.q_lr),
      buffer_(config_.buffer_capacity) {
    target_.copy_params_from(policy_);
}

int DqnAgent::act(std::span<const double> observation, double epsilon) {
    return select_action(policy_, observation, epsilon, rng_);
}

int DqnAgent::act_greedy(std::span<const double> observation) const {
    return argmax_q(policy_, observation);
}

void DqnAgent::observe(Transition t) {
    ++env_steps_;
    buffer_.push(std::move(t));
}

std::optional<double> DqnAgent::learn() {
    if (buffer_.size() < static_cast<std::size_t>(config_.batch_size)) return std::nullopt;

    std::vector<std::vector<double>> inputs;
    std::vector<int> actions;
    std::vector<double> targets;
    inputs.reserve(static_cast<std::size_t>(config_.batch_size));
    actions.reserve(static_cast<std::size_t>(config_.batch_size));
    targets.reserve(static_cast<std::size_t>(config_.batch_size));
    for (int b = 0; b < config_.batch_size; ++b) {
        const std::size_t pos = rng_.uniform_int(buffer_.size());
        const std::vector<const Transition*> s = buffer_.slice(pos, config_.n_step);
        targets.push_back(nstep_target(s, policy_, target_, config_.gamma));
        inputs.push_back(s.front()->state);
        actions.push_back(s.front()->action);
    }

    const double loss = policy_.train_step(optimizer_, inputs, actions, targets, rng_);
    ++learn_steps_;
    if (learn_steps_ % static_cast<std::uint64_t>(config_.sync_interval) == 0)
        target_.copy_params_from(policy_);
    return loss;
}

double DqnAgent::epsilon() const {
    return epsilon_schedule(env_steps_, config_.epsilon_start, config_.epsilon_end,
                            config_.epsilon_decay_steps) *
           epsilon_scale_;
}

void DqnAgent::save(std::ostream& os) const {
    os.precision(17);
    os << "qarch-agent 1\n";
    os << "env_steps " << env_steps_ << '\n';
    os << "learn_steps " << learn_steps_ << '\n';
    os << "epsilon_scale " << epsilon_scale_ << '\n';
    rng_.save(os);
    optimizer_.save(os);
    policy_.save(os);
    target_.save(os);
}

void DqnAgent::load(std::istream& is) {
    std::string tag;
    int version = 0;
    is >> tag >> version;
    if (!is || tag != "qarch-agent" || version != 1) throw std::runtime_error("bad agent checkpoint header");
    is >> tag >> env_steps_;
    if (!is || tag != "env_steps") throw std::runtime_error("bad agent checkpoint env_steps");
    is >> tag >> learn_steps_;
    if (!is || tag != "learn_steps") throw std::runtime_error("bad agent checkpoint learn_steps");
    is >> tag >> epsilon_scale_;
    if (!is || tag != "epsilon_scale") throw std::runtime_error("bad agent checkpoint epsilon_scale");
    rng_.load(is);
    optimizer_.load(is);
    nn::Mlp policy = nn::Mlp::load(is);
    nn::Mlp target_net = nn::Mlp::load(is);
    if (policy.config().layer_sizes != policy_.config().layer_sizes ||
        target_net.config().layer_sizes != target_.config().layer_sizes)
        throw std::runtime_error("agent checkpoint architecture mismatch");
    policy_ = std::move(policy);
    target_ = std::move(target_net);
}

AdaptiveState adaptive_update(AdaptiveState state, Phase phase, const EpisodeOutcome& outcome,
                              const AdaptiveConfig& cfg) {
    if (phase == Phase::Train) {
        state.train_window.push_back(outcome.success);
        while (static_cast<int>(state.train_window.size()) > cfg.window) state.train_window.pop_front();
        const int successes =
            static_cast<int>(std::count(state.train_window.begin(), state.train_window.end(), true));
        if (successes >= cfg.needed) {
            state.y_target = std::min(state.y_target + cfg.increment, cfg.y_target_cap);
            state.train_window.clear();
        }
    } else {
        if (outcome.success) {
            if (++state.test_streak >= cfg.test_streak) {
                state.y_target = std::min(state.y_target + cfg.increment, cfg.y_target_cap);
                state.epsilon *= cfg.epsilon_cut;
                state.epsilon_scale *= cfg.epsilon_cut;
                state.test_streak = 0;
            }
        } else {
            state.test_streak = 0;
        }
    }
    return state;
}

void save_adaptive(std::ostream& os, const AdaptiveState& s) {
    os.precision(17);
    os << "adaptive 1\n";
    os << "y_target " << s.y_target << '\n';
    os << "epsilon " << s.epsilon << '\n';
    os << "epsilon_scale " << s.epsilon_scale << '\n';
    os << "test_streak " << s.test_streak << '\n';
    os << "window " << s.train_window.size();
    for (bool b : s.train_window) os << ' ' << (b ? 1 : 0);
    os << '\n';
}

AdaptiveState load_adaptive(std::istream& is) {
    std::string tag;
    int version = 0;
    is >> tag >> version;
    if (!is || tag != "adaptive" || version != 1) throw std::runtime_error("bad adaptive state header");
    AdaptiveState s;
    is >> tag >> s.y_target;
    if (!is || tag != "y_target") throw std::runtime_error("bad adaptive state y_target");
    is >> tag >> s.epsilon;
    if (!is || tag != "epsilon") throw std::runtime_error("bad adaptive state epsilon");
    is >> tag >> s.epsilon_scale;
    if (!is || tag != "epsilon_scale") throw std::runtime_error("bad adaptive state epsilon_scale");
    is >> tag >> s.test_streak;
    if (!is || tag != "test_streak") throw std::runtime_error("bad adaptive state test_streak");
    std::size_t n = 0;
    is >> tag >> n;
    if (!is || tag != "window" || n > 1024) throw std::runtime_error("bad adaptive state window");
    for (std::size_t i = 0; i < n; ++i) {
        int b = 0;
        is >> b;
        s.train_window.push_back(b != 0);
    }
    if (!is) throw std::runtime_error("truncated adaptive state");
    return s;
}

}  // namespace qarch::agent
