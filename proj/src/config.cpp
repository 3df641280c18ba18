#include "qarch/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qarch::cli {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw std::invalid_argument("config: bad value for '" + key + "': " + value);
}

double to_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || !std::isfinite(x)) bad_value(key, v);
    return x;
}

long long to_int(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0') bad_value(key, v);
    return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    if (!v.empty() && v[0] == '-') bad_value(key, v);
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0') bad_value(key, v);
    return x;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    bad_value(key, v);
}

template <typename T, typename Parse>
std::vector<T> to_list(const std::string& key, const std::string& v, Parse parse) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) bad_value(key, v);
        out.push_back(parse(key, item));
    }
    if (out.empty()) bad_value(key, v);
    return out;
}

std::string fmt(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

void set_field(ExperimentConfig& c, const std::string& key, const std::string& value) {
    if (key == "dataset") c.dataset = value;
    else if (key == "n_samples") c.n_samples = static_cast<int>(to_int(key, value));
    else if (key == "n_features") c.n_features = static_cast<int>(to_int(key, value));
    else if (key == "n_informative") c.n_informative = static_cast<int>(to_int(key, value));
    else if (key == "class_sep") c.class_sep = to_double(key, value);
    else if (key == "noise_std") c.noise_std = to_double(key, value);
    else if (key == "test_fraction") c.test_fraction = to_double(key, value);
    else if (key == "n_qubits") c.n_qubits = static_cast<int>(to_int(key, value));
    else if (key == "max_gates") c.max_gates = static_cast<int>(to_int(key, value));
    else if (key == "y_target") c.y_target = to_double(key, value);
    else if (key == "adaptive") c.adaptive = to_bool(key, value);
    else if (key == "max_epochs_per_step") c.max_epochs_per_step = static_cast<int>(to_int(key, value));
    else if (key == "classifier_lr") c.classifier_lr = to_double(key, value);
    else if (key == "episodes") c.episodes = static_cast<int>(to_int(key, value));
    else if (key == "test_interval") c.test_interval = static_cast<int>(to_int(key, value));
    else if (key == "n_step") c.n_step = static_cast<int>(to_int(key, value));
    else if (key == "gamma") c.gamma = to_double(key, value);
    else if (key == "batch_size") c.batch_size = static_cast<int>(to_int(key, value));
    else if (key == "sync_interval") c.sync_interval = static_cast<int>(to_int(key, value));
    else if (key == "buffer_capacity") c.buffer_capacity = to_u64(key, value);
    else if (key == "learn_start") c.learn_start = to_u64(key, value);
    else if (key == "epsilon_start") c.epsilon_start = to_double(key, value);
    else if (key == "epsilon_end") c.epsilon_end = to_double(key, value);
    else if (key == "epsilon_decay_steps") c.epsilon_decay_steps = to_u64(key, value);
    else if (key == "hidden_sizes")
        c.hidden_sizes = to_list<int>(key, value, [](const std::string& k, const std::string& s) {
            return static_cast<int>(to_int(k, s));
        });
    else if (key == "leaky_slope") c.leaky_slope = to_double(key, value);
    else if (key == "dropout") c.dropout = to_double(key, value);
    else if (key == "q_lr") c.q_lr = to_double(key, value);
    else if (key == "adaptive_window") c.adaptive_window = static_cast<int>(to_int(key, value));
    else if (key == "adaptive_needed") c.adaptive_needed = static_cast<int>(to_int(key, value));
    else if (key == "adaptive_test_streak") c.adaptive_test_streak = static_cast<int>(to_int(key, value));
    else if (key == "adaptive_increment") c.adaptive_increment = to_double(key, value);
    else if (key == "y_target_cap") c.y_target_cap = to_double(key, value);
    else if (key == "epsilon_cut") c.epsilon_cut = to_double(key, value);
    else if (key == "smooth_train") c.smooth_train = static_cast<int>(to_int(key, value));
    else if (key == "smooth_test") c.smooth_test = static_cast<int>(to_int(key, value));
    else if (key == "seeds")
        c.seeds = to_list<std::uint64_t>(key, value, [](const std::string& k, const std::string& s) {
            return to_u64(k, s);
        });
    else if (key == "write_traces") c.write_traces = to_bool(key, value);
    else if (key == "out_dir") c.out_dir = value;
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

[[noreturn]] void field_error(const std::string& msg) {
    throw std::invalid_argument("config: " + msg);
}

}  // namespace

double ExperimentConfig::effective_gamma() const {
    return gamma > 0.0 ? gamma : std::pow(0.005, 1.0 / static_cast<double>(max_gates));
}

void ExperimentConfig::validate() const {
    if (dataset != "classification" && dataset != "moons")
        field_error("dataset must be 'classification' or 'moons'");
    if (n_samples < 4) field_error("n_samples must be at least 4");
    if (n_features < 1) field_error("n_features must be positive");
    if (dataset == "moons" && n_features != 2) field_error("n_features must be 2 for the moons dataset");
    if (n_informative < 1 || n_informative > n_features)
        field_error("n_informative must be in [1, n_features]");
    if (class_sep < 0.0) field_error("class_sep must be nonnegative");
    if (noise_std < 0.0) field_error("noise_std must be nonnegative");
    if (test_fraction <= 0.0 || test_fraction >= 1.0) field_error("test_fraction must be in (0, 1)");
    if (n_qubits < 2 || n_qubits > 14) field_error("n_qubits must be in [2, 14]");
    if (n_features != n_qubits) field_error("n_features must equal n_qubits (one feature per qubit)");
    if (max_gates < 1) field_error("max_gates must be positive");
    if (y_target <= 0.0 || y_target > 1.0) field_error("y_target must be in (0, 1]");
    if (max_epochs_per_step < 1) field_error("max_epochs_per_step must be positive");
    if (classifier_lr <= 0.0) field_error("classifier_lr must be positive");
    if (episodes < 1) field_error("episodes must be positive");
    if (test_interval < 1) field_error("test_interval must be positive");
    if (n_step < 1) field_error("n_step must be positive");
    if (gamma < 0.0 || gamma > 1.0) field_error("gamma must be in [0, 1] (0 selects 0.005^(1/max_gates))");
    if (batch_size < 1) field_error("batch_size must be positive");
    if (sync_interval < 1) field_error("sync_interval must be positive");
    if (buffer_capacity < static_cast<std::uint64_t>(batch_size))
        field_error("buffer_capacity must be at least batch_size");
    if (epsilon_start < 0.0 || epsilon_start > 1.0) field_error("epsilon_start must be in [0, 1]");
    if (epsilon_end < 0.0 || epsilon_end > epsilon_start)
        field_error("epsilon_end must be in [0, epsilon_start]");
    if (hidden_sizes.empty()) field_error("hidden_sizes must list at least one layer");
    for (int h : hidden_sizes)
        if (h < 1) field_error("hidden_sizes entries must be positive");
    if (leaky_slope < 0.0) field_error("leaky_slope must be nonnegative");
    if (dropout < 0.0 || dropout >= 1.0) field_error("dropout must be in [0, 1)");
    if (q_lr <= 0.0) field_error("q_lr must be positive");
    if (adaptive_window < 1) field_error("adaptive_window must be positive");
    if (adaptive_needed < 1 || adaptive_needed > adaptive_window)
        field_error("adaptive_needed must be in [1, adaptive_window]");
    if (adaptive_test_streak < 1) field_error("adaptive_test_streak must be positive");
    if (adaptive_increment <= 0.0) field_error("adaptive_increment must be positive");
    if (y_target_cap <= 0.0 || y_target_cap > 1.0) field_error("y_target_cap must be in (0, 1]");
    if (epsilon_cut <= 0.0 || epsilon_cut > 1.0) field_error("epsilon_cut must be in (0, 1]");
    if (smooth_train < 1) field_error("smooth_train must be positive");
    if (smooth_test < 1) field_error("smooth_test must be positive");
    if (seeds.empty()) field_error("seeds must list at least one seed");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig c;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string trimmed = trim(line);
        if (trimmed.empty()) continue;
        const std::size_t eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " is not 'key = value'");
        const std::string key = trim(trimmed.substr(0, eq));
        const std::string value = trim(trimmed.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config: line " + std::to_string(line_no) + " has an empty key");
        set_field(c, key, value);
    }
    return c;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "dataset = " << c.dataset << '\n';
    os << "n_samples = " << c.n_samples << '\n';
    os << "n_features = " << c.n_features << '\n';
    os << "n_informative = " << c.n_informative << '\n';
    os << "class_sep = " << fmt(c.class_sep) << '\n';
    os << "noise_std = " << fmt(c.noise_std) << '\n';
    os << "test_fraction = " << fmt(c.test_fraction) << '\n';
    os << "n_qubits = " << c.n_qubits << '\n';
    os << "max_gates = " << c.max_gates << '\n';
    os << "y_target = " << fmt(c.y_target) << '\n';
    os << "adaptive = " << (c.adaptive ? "true" : "false") << '\n';
    os << "max_epochs_per_step = " << c.max_epochs_per_step << '\n';
    os << "classifier_lr = " << fmt(c.classifier_lr) << '\n';
    os << "episodes = " << c.episodes << '\n';
    os << "test_interval = " << c.test_interval << '\n';
    os << "n_step = " << c.n_step << '\n';
    os << "gamma = " << fmt(c.gamma) << '\n';
    os << "batch_size = " << c.batch_size << '\n';
    os << "sync_interval = " << c.sync_interval << '\n';
    os << "buffer_capacity = " << c.buffer_capacity << '\n';
    os << "learn_start = " << c.learn_start << '\n';
    os << "epsilon_start = " << fmt(c.epsilon_start) << '\n';
    os << "epsilon_end = " << fmt(c.epsilon_end) << '\n';
    os << "epsilon_decay_steps = " << c.epsilon_decay_steps << '\n';
    os << "hidden_sizes = ";
    for (std::size_t i = 0; i < c.hidden_sizes.size(); ++i)
        os << (i ? "," : "") << c.hidden_sizes[i];
    os << '\n';
    os << "leaky_slope = " << fmt(c.leaky_slope) << '\n';
    os << "dropout = " << fmt(c.dropout) << '\n';
    os << "q_lr = " << fmt(c.q_lr) << '\n';
    os << "adaptive_window = " << c.adaptive_window << '\n';
    os << "adaptive_needed = " << c.adaptive_needed << '\n';
    os << "adaptive_test_streak = " << c.adaptive_test_streak << '\n';
    os << "adaptive_increment = " << fmt(c.adaptive_increment) << '\n';
    os << "y_target_cap = " << fmt(c.y_target_cap) << '\n';
    os << "epsilon_cut = " << fmt(c.epsilon_cut) << '\n';
    os << "smooth_train = " << c.smooth_train << '\n';
    os << "smooth_test = " << c.smooth_test << '\n';
    os << "seeds = ";
    for (std::size_t i = 0; i < c.seeds.size(); ++i) os << (i ? "," : "") << c.seeds[i];
    os << '\n';
    os << "write_traces = " << (c.write_traces ? "true" : "false") << '\n';
    os << "out_dir = " << c.out_dir << '\n';
    return os.str();
}

}  // namespace qarch::cli
