#include "qarch/datasets.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qarch/rng.hpp"

namespace qarch::datasets {

namespace {

void shuffle_rows(Dataset& d, Rng& rng) {
    const std::size_t n = d.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order.data(), n);

    std::vector<double> features(d.features.size());
    std::vector<int> labels(n);
    const std::size_t nf = static_cast<std::size_t>(d.n_features);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t src = order[i];
        for (std::size_t j = 0; j < nf; ++j) features[i * nf + j] = d.features[src * nf + j];
        labels[i] = d.labels[src];
    }
    d.features = std::move(features);
    d.labels = std::move(labels);
}

}  // namespace

Dataset make_classification(int n_samples, int n_features, int n_informative,
                            double class_sep, std::uint64_t seed) {
    if (n_samples < 2 || n_samples % 2 != 0) {
        throw std::invalid_argument("make_classification: n_samples must be even and >= 2");
    }
    if (n_informative < 1 || n_informative > n_features) {
        throw std::invalid_argument("make_classification: need 1 <= n_informative <= n_features");
    }

    Rng rng(seed);
    const int n_redundant = n_features - n_informative;
    const int per_class = n_samples / 2;

    // Vertex for class 0; class 1 sits at the antipode, so class-conditional
    // means differ by 2*class_sep in every informative dimension.
    std::vector<double> vertex(n_informative);
    for (double& v : vertex) v = rng.uniform() < 0.5 ? class_sep : -class_sep;

    // Redundant features as fixed linear maps of the informative block.
    std::vector<double> mix(static_cast<std::size_t>(n_redundant) * n_informative);
    for (double& c : mix) c = rng.uniform(-1.0, 1.0);

    Dataset d;
    d.n_features = n_features;
    d.seed = seed;
    d.features.resize(static_cast<std::size_t>(n_samples) * n_features);
    d.labels.resize(n_samples);

    std::vector<double> informative(n_informative);
    for (int s = 0; s < n_samples; ++s) {
        const int label = s < per_class ? 0 : 1;
        const double sign = label == 0 ? 1.0 : -1.0;
        for (int k = 0; k < n_informative; ++k) {
            informative[k] = sign * vertex[k] + rng.normal();
        }
        double* row = d.features.data() + static_cast<std::size_t>(s) * n_features;
        for (int k = 0; k < n_informative; ++k) row[k] = informative[k];
        for (int r = 0; r < n_redundant; ++r) {
            double acc = 0.0;
            for (int k = 0; k < n_informative; ++k) {
                acc += mix[static_cast<std::size_t>(r) * n_informative + k] * informative[k];
            }
            row[n_informative + r] = acc;
        }
        d.labels[s] = label;
    }

    shuffle_rows(d, rng);
    return d;
}

Dataset make_moons(int n_samples, double noise_std, std::uint64_t seed) {
    if (n_samples < 2 || n_samples % 2 != 0) {
        throw std::invalid_argument("make_moons: n_samples must be even and >= 2");
    }
    if (noise_std < 0.0) {
        throw std::invalid_argument("make_moons: noise_std must be >= 0");
    }

    Rng rng(seed);
    const int per_class = n_samples / 2;

    Dataset d;
    d.n_features = 2;
    d.seed = seed;
    d.features.resize(static_cast<std::size_t>(n_samples) * 2);
    d.labels.resize(n_samples);

    for (int i = 0; i < per_class; ++i) {
        const double t = per_class == 1 ? 0.0
                                        : std::numbers::pi * i / static_cast<double>(per_class - 1);
        double* row0 = d.features.data() + static_cast<std::size_t>(i) * 2;
        row0[0] = std::cos(t);
        row0[1] = std::sin(t);
        d.labels[i] = 0;

        double* row1 = d.features.data() + static_cast<std::size_t>(per_class + i) * 2;
        row1[0] = 1.0 - std::cos(t);
        row1[1] = 0.5 - std::sin(t);
        d.labels[per_class + i] = 1;
    }
    if (noise_std > 0.0) {
        for (double& f : d.features) f += noise_std * rng.normal();
    }

    shuffle_rows(d, rng);
    return d;
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& d, double test_fraction,
                                             std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw std::invalid_argument("train_test_split: test_fraction must be in (0, 1)");
    }

    Rng rng(seed);
    std::vector<std::size_t> class_idx[2];
    for (std::size_t i = 0; i < d.size(); ++i) {
        class_idx[d.labels[i] == 0 ? 0 : 1].push_back(i);
    }

    // Total test size rounds to the nearest sample; per-class counts are the
    // floor, with leftovers assigned by largest fractional remainder.
    const std::size_t total_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(d.size())));
    std::size_t take[2];
    double frac[2];
    std::size_t assigned = 0;
    for (int c = 0; c < 2; ++c) {
        const double exact = test_fraction * static_cast<double>(class_idx[c].size());
        take[c] = static_cast<std::size_t>(exact);
        frac[c] = exact - static_cast<double>(take[c]);
        assigned += take[c];
    }
    while (assigned < total_test) {
        const int c = frac[0] >= frac[1] ? 0 : 1;
        take[c] += 1;
        frac[c] = -1.0;
        ++assigned;
    }

    Dataset train, test;
    train.n_features = test.n_features = d.n_features;
    train.seed = test.seed = seed;
    const std::size_t nf = static_cast<std::size_t>(d.n_features);
    auto append = [&](Dataset& out, std::size_t src) {
        for (std::size_t j = 0; j < nf; ++j) out.features.push_back(d.features[src * nf + j]);
        out.labels.push_back(d.labels[src]);
    };
    for (int c = 0; c < 2; ++c) {
        rng.shuffle(class_idx[c].data(), class_idx[c].size());
        for (std::size_t i = 0; i < class_idx[c].size(); ++i) {
            append(i < take[c] ? test : train, class_idx[c][i]);
        }
    }
    shuffle_rows(train, rng);
    shuffle_rows(test, rng);
    return {std::move(train), std::move(test)};
}

void write_csv(const Dataset& d, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_csv: cannot open " + path.string());
    for (int j = 0; j < d.n_features; ++j) os << 'f' << j << ',';
    os << "label\n";
    char buf[64];
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto row = d.row(i);
        for (int j = 0; j < d.n_features; ++j) {
            std::snprintf(buf, sizeof(buf), "%.9g", row[j]);
            os << buf << ',';
        }
        os << d.labels[i] << '\n';
    }
}

Dataset read_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_csv: cannot open " + path.string());
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("read_csv: empty file");

    int n_features = 0;
    for (char ch : line) {
        if (ch == ',') ++n_features;
    }
    Dataset d;
    d.n_features = n_features;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        for (int j = 0; j < n_features; ++j) {
            if (!std::getline(ss, cell, ',')) throw std::runtime_error("read_csv: short row");
            d.features.push_back(std::stod(cell));
        }
        if (!std::getline(ss, cell)) throw std::runtime_error("read_csv: missing label");
        d.labels.push_back(std::stoi(cell));
    }
    return d;
}

}  // namespace qarch::datasets
