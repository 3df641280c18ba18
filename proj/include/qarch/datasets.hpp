#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace qarch::datasets {

// Row-major feature matrix plus binary labels. Generators are pure
// functions of (args, seed); identical calls reproduce bit-identical data.
struct Dataset {
    int n_features = 0;
    std::vector<double> features;  // size() == n_features * labels.size()
    std::vector<int> labels;       // values in {0, 1}
    std::uint64_t seed = 0;

    std::size_t size() const { return labels.size(); }

    std::span<const double> row(std::size_t i) const {
        return {features.data() + i * static_cast<std::size_t>(n_features),
                static_cast<std::size_t>(n_features)};
    }
};

// Two Gaussian clusters (std 1) at antipodal vertices +v / -v of the
// {±class_sep}^n_informative hypercube, v drawn from the seed; the remaining
// features are seeded random linear combinations (coefficients uniform in
// (-1,1)) of the informative ones. Rows are shuffled by the same seed.
Dataset make_classification(int n_samples, int n_features, int n_informative,
                            double class_sep, std::uint64_t seed);

// Two interleaving half-moon arcs: class 0 at (cos t, sin t), class 1 at
// (1 - cos t, 0.5 - sin t), t evenly spaced over [0, pi], plus isotropic
// Gaussian noise of the given std on each coordinate.
Dataset make_moons(int n_samples, double noise_std, std::uint64_t seed);

// Stratified split: per-class seeded shuffle, class balance within ±1.
std::pair<Dataset, Dataset> train_test_split(const Dataset& d, double test_fraction,
                                             std::uint64_t seed);

// CSV with header f0,...,f{n-1},label; floats carry 9 significant digits.
void write_csv(const Dataset& d, const std::filesystem::path& path);
Dataset read_csv(const std::filesystem::path& path);

}  // namespace qarch::datasets
