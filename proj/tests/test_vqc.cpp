#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <span>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "qarch/classifier.hpp"
#include "qarch/circuit.hpp"
#include "qarch/datasets.hpp"
#include "qarch/rng.hpp"

using qarch::Rng;
using qarch::datasets::Dataset;
using qarch::qsim::GateKind;
using qarch::qsim::Statevector;
using qarch::vqc::bce_loss;
using qarch::vqc::CircuitSpec;
using qarch::vqc::EmbeddedDataset;
using qarch::vqc::evaluate_accuracy;
using qarch::vqc::param_shift_grad;
using qarch::vqc::predict_prob;
using qarch::vqc::read_circuit;
using qarch::vqc::same_structure;
using qarch::vqc::train_classifier;
using qarch::vqc::write_circuit;

namespace fs = std::filesystem;
namespace {

constexpr double kPi = std::numbers::pi;

Dataset dataset_from_rows(int n_features, const std::vector<std::vector<double>>& rows,
                          const std::vector<int>& labels) {
    Dataset d;
    d.n_features = n_features;
    d.labels = labels;
    for (const auto& r : rows) {
        REQUIRE(static_cast<int>(r.size()) == n_features);
        d.features.insert(d.features.end(), r.begin(), r.end());
    }
    return d;
}

// Central finite differences of the mean BCE over the batch.
std::vector<double> fd_grad(CircuitSpec circuit, const EmbeddedDataset& batch, double h) {
    std::vector<double> g(circuit.params.size());
    for (std::size_t k = 0; k < circuit.params.size(); ++k) {
        const double saved = circuit.params[k];
        circuit.params[k] = saved + h;
        const double hi = bce_loss(circuit, batch);
        circuit.params[k] = saved - h;
        const double lo = bce_loss(circuit, batch);
        circuit.params[k] = saved;
        g[k] = (hi - lo) / (2.0 * h);
    }
    return g;
}

fs::path temp_dir() {
    const auto dir = fs::temp_directory_path() / "qarch-vqc-tests";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_SUITE("vqc") {

TEST_CASE("circuit resolves params in placement order") {
    CircuitSpec c;
    c.n_qubits = 3;
    c.add_rotation(GateKind::RotX, 0);
    c.add_cnot(2, 1);
    c.add_rotation(GateKind::RotY, 1);
    c.params = {0.7, -0.2};

    REQUIRE(c.n_params() == 2);
    const auto gates = c.resolved_gates();
    REQUIRE(gates.size() == 3);
    CHECK(gates[0].angle == doctest::Approx(0.7));
    CHECK(gates[1].kind == GateKind::Cnot);
    CHECK(gates[2].angle == doctest::Approx(-0.2));

    Statevector via_spec(3);
    c.apply_to(via_spec);
    Statevector manual(3);
    manual.apply(gates);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(std::abs(via_spec.amp(i) - manual.amp(i)) < 1e-14);
    }
}

TEST_CASE("circuit text artifact round trips") {
    CircuitSpec c;
    c.n_qubits = 4;
    c.readout_qubit = 0;
    c.add_rotation(GateKind::RotY, 2, 0.3517);
    c.add_cnot(2, 0);
    c.add_rotation(GateKind::RotX, 1, -1.25);
    c.add_rotation(GateKind::RotZ, 3, 2.0);

    const auto path = temp_dir() / "roundtrip.txt";
    write_circuit(c, path);

    std::ifstream is(path);
    std::string first;
    std::getline(is, first);
    CHECK(first == "# n_qubits=4 readout=0");
    std::string second;
    std::getline(is, second);
    CHECK(second == "RY 2 0.351700");

    const CircuitSpec back = read_circuit(path);
    CHECK(back.n_qubits == 4);
    CHECK(back.readout_qubit == 0);
    CHECK(same_structure(c, back));
    REQUIRE(back.params.size() == c.params.size());
    for (std::size_t k = 0; k < c.params.size(); ++k) {
        CHECK(std::abs(back.params[k] - c.params[k]) <= 5e-7);
    }
}

TEST_CASE("circuit round trip preserves params to file precision") {
    CircuitSpec c;
    c.n_qubits = 2;
    c.add_rotation(GateKind::RotZ, 1, 1.234567891);
    c.add_rotation(GateKind::RotY, 0, -0.000001);
    const auto path = temp_dir() / "precision.txt";
    write_circuit(c, path);
    const CircuitSpec back = read_circuit(path);
    REQUIRE(back.params.size() == 2);
    CHECK(std::abs(back.params[0] - c.params[0]) <= 5e-7);
    CHECK(std::abs(back.params[1] - c.params[1]) <= 5e-7);
}

TEST_CASE("predict_prob matches closed form for one rotation") {
    // Zero features embed to identity, so the single RY fully determines
    // the readout: prob = (1 + cos(theta)) / 2.
    CircuitSpec c;
    c.n_qubits = 1;
    c.add_rotation(GateKind::RotY, 0);
    const std::vector<double> x = {0.0};

    for (double theta : {0.0, 0.25, kPi / 2.0, 1.9, kPi, -2.3, 4.0}) {
        c.params[0] = theta;
        const double expected = 0.5 * (1.0 + std::cos(theta));
        CHECK(predict_prob(c, std::span<const double>(x)) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("embedded-state and raw-feature predictions agree") {
    Rng rng(99);
    CircuitSpec c;
    c.n_qubits = 3;
    c.readout_qubit = 1;
    c.add_rotation(GateKind::RotX, 0, rng.uniform(-kPi, kPi));
    c.add_cnot(0, 2);
    c.add_rotation(GateKind::RotY, 2, rng.uniform(-kPi, kPi));

    const std::vector<double> x = {0.4, -1.1, 2.7};
    Dataset d = dataset_from_rows(3, {{0.4, -1.1, 2.7}}, {1});
    const auto emb = EmbeddedDataset::from(d, 3);
    REQUIRE(emb.size() == 1);
    CHECK(predict_prob(c, std::span<const double>(x)) ==
          doctest::Approx(predict_prob(c, emb.states[0])).epsilon(1e-14));
}

TEST_CASE("bce_loss pins and clamping") {
    CHECK(bce_loss(1, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(bce_loss(0, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    // Saturated predictions are clamped to 1e-7 away from {0, 1}. The 1 - p
    // cancellation costs a few ulps, so this pin is looser than the others.
    CHECK(bce_loss(0, 1.0) == doctest::Approx(-std::log(1e-7)).epsilon(1e-9));
    CHECK(bce_loss(1, 0.0) == doctest::Approx(-std::log(1e-7)).epsilon(1e-12));
    CHECK(bce_loss(1, 1.0) == doctest::Approx(-std::log(1.0 - 1e-7)).epsilon(1e-9));
    CHECK(bce_loss(1, 1.0) < 2e-7);
}

TEST_CASE("single rotation gradient has the textbook sign") {
    // One qubit, one RY at theta = pi/2, zero features: y_hat = 1/2.
    // d y_hat / d theta = -sin(theta)/2 = -1/2, so
    //   label 0: dL/dtheta = (1/(1-y_hat)) * (-1/2) = -1
    //   label 1: dL/dtheta = (-1/y_hat)   * (-1/2) = +1
    CircuitSpec c;
    c.n_qubits = 1;
    c.add_rotation(GateKind::RotY, 0, kPi / 2.0);

    for (int label : {0, 1}) {
        Dataset d = dataset_from_rows(1, {{0.0}}, {label});
        const auto emb = EmbeddedDataset::from(d, 1);
        const auto g = param_shift_grad(c, emb);
        REQUIRE(g.size() == 1);
        const double expected = label == 0 ? -1.0 : 1.0;
        CHECK(g[0] == doctest::Approx(expected).epsilon(1e-10));
        const auto fd = fd_grad(c, emb, 1e-6);
        CHECK(g[0] == doctest::Approx(fd[0]).epsilon(1e-7));
    }
}

TEST_CASE("parameter shift matches finite differences on random circuits") {
    Rng rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        CircuitSpec c;
        c.n_qubits = 3;
        c.readout_qubit = static_cast<int>(rng.uniform_int(3));
        const int n_gates = 2 + static_cast<int>(rng.uniform_int(5));
        for (int gidx = 0; gidx < n_gates; ++gidx) {
            if (rng.uniform() < 0.3) {
                const int control = static_cast<int>(rng.uniform_int(3));
                int target = static_cast<int>(rng.uniform_int(3));
                while (target == control) target = static_cast<int>(rng.uniform_int(3));
                c.add_cnot(control, target);
            } else {
                const GateKind kind = static_cast<GateKind>(rng.uniform_int(3));
                c.add_rotation(kind, static_cast<int>(rng.uniform_int(3)),
                               rng.uniform(-kPi, kPi));
            }
        }
        if (c.n_params() == 0) c.add_rotation(GateKind::RotY, 0, rng.uniform(-kPi, kPi));

        std::vector<std::vector<double>> rows;
        std::vector<int> labels;
        for (int s = 0; s < 4; ++s) {
            rows.push_back({rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
                            rng.uniform(-2.0, 2.0)});
            labels.push_back(s % 2);
        }
        const auto emb = EmbeddedDataset::from(dataset_from_rows(3, rows, labels), 3);

        const auto analytic = param_shift_grad(c, emb);
        const auto numeric = fd_grad(c, emb, 1e-5);
        REQUIRE(analytic.size() == numeric.size());
        for (std::size_t k = 0; k < analytic.size(); ++k) {
            CHECK(std::abs(analytic[k] - numeric[k]) <=
                  1e-7 + 1e-6 * std::abs(numeric[k]));
        }
    }
}

TEST_CASE("training stops before stepping when target already met") {
    CircuitSpec c;
    c.n_qubits = 1;
    c.add_rotation(GateKind::RotY, 0, 0.0);  // y_hat = 1 for zero features
    Dataset train = dataset_from_rows(1, {{0.0}, {0.0}}, {1, 1});
    const auto out = train_classifier(c, train, train, 50, 0.9);
    CHECK(out.epochs_run == 0);
    CHECK(out.train_accuracy == doctest::Approx(1.0));
    CHECK(out.test_accuracy == doctest::Approx(1.0));
    CHECK(c.params[0] == doctest::Approx(0.0));

    // A target of zero is met by any accuracy, including 0.
    CircuitSpec c2 = c;
    c2.params[0] = 0.0;
    Dataset wrong = dataset_from_rows(1, {{0.0}, {0.0}}, {0, 0});
    const auto out2 = train_classifier(c2, wrong, wrong, 50, 0.0);
    CHECK(out2.epochs_run == 0);
    CHECK(out2.train_accuracy == doctest::Approx(0.0));
}

TEST_CASE("unreachable target exhausts the epoch budget") {
    CircuitSpec c;
    c.n_qubits = 1;
    c.add_rotation(GateKind::RotY, 0, 0.4);
    Dataset train = dataset_from_rows(1, {{0.0}, {0.0}}, {0, 1});
    const auto out = train_classifier(c, train, train, 7, 1.1);
    CHECK(out.epochs_run == 7);
    CHECK(out.train_accuracy <= 0.5 + 1e-12);
    REQUIRE(out.trained_params.size() == 1);
    CHECK(out.trained_params[0] == doctest::Approx(c.params[0]));
}

TEST_CASE("parameterless circuit trains zero epochs and reports accuracy") {
    CircuitSpec c;
    c.n_qubits = 2;
    c.add_cnot(0, 1);
    Dataset train = dataset_from_rows(2, {{0.0, 0.0}, {0.0, 0.0}}, {1, 1});
    const auto out = train_classifier(c, train, train, 25, 0.99);
    CHECK(out.epochs_run == 0);
    CHECK(out.trained_params.empty());
    // Zero features embed to |00>, CNOT leaves it, readout Z = +1 -> class 1.
    CHECK(out.train_accuracy == doctest::Approx(1.0));
}

TEST_CASE("training reaches the brute-force loss minimum") {
    // Identical inputs with labels {0,0,0,1}: optimal y_hat = 1/4, reached at
    // cos(theta) = -1/2. The scan below is the independent optimum.
    Dataset train = dataset_from_rows(1, {{0.0}, {0.0}, {0.0}, {0.0}}, {0, 0, 0, 1});
    const auto emb = EmbeddedDataset::from(train, 1);

    CircuitSpec probe;
    probe.n_qubits = 1;
    probe.add_rotation(GateKind::RotY, 0, 0.0);
    double scan_min = 1e300;
    for (int i = 0; i < 20000; ++i) {
        probe.params[0] = -kPi + 2.0 * kPi * i / 20000.0;
        scan_min = std::min(scan_min, bce_loss(probe, emb));
    }
    const double closed_form = 0.75 * std::log(4.0 / 3.0) + 0.25 * std::log(4.0);
    CHECK(scan_min == doctest::Approx(closed_form).epsilon(1e-6));

    CircuitSpec c;
    c.n_qubits = 1;
    c.add_rotation(GateKind::RotY, 0, 0.3);
    const double initial_loss = bce_loss(c, emb);
    const auto out = train_classifier(c, train, train, 300, 1.1);
    CHECK(out.epochs_run == 300);
    CHECK(out.final_loss < initial_loss);
    CHECK(out.final_loss <= scan_min + 5e-3);
}

TEST_CASE("warm start resumes from trained parameters") {
    Dataset train = dataset_from_rows(1, {{0.0}, {0.0}}, {0, 0});
    CircuitSpec c;
    c.n_qubits = 1;
    c.add_rotation(GateKind::RotY, 0, 1.2);  // y_hat ~ 0.68, predicts class 1

    const auto first = train_classifier(c, train, train, 200, 1.0);
    CHECK(first.epochs_run > 0);
    CHECK(first.train_accuracy == doctest::Approx(1.0));
    const double theta_after = c.params[0];

    const auto second = train_classifier(c, train, train, 200, 1.0);
    CHECK(second.epochs_run == 0);
    CHECK(c.params[0] == doctest::Approx(theta_after));
}

TEST_CASE("separable data trains to high accuracy") {
    const Dataset full = qarch::datasets::make_classification(80, 2, 2, 2.0, 5);
    const auto [train, test] = qarch::datasets::train_test_split(full, 0.25, 6);

    CircuitSpec c;
    c.n_qubits = 2;
    c.add_rotation(GateKind::RotY, 0, 0.1);
    c.add_rotation(GateKind::RotY, 1, -0.1);
    c.add_cnot(1, 0);
    c.add_rotation(GateKind::RotY, 0, 0.05);

    const auto out = train_classifier(c, train, test, 80, 0.95);
    CHECK(out.train_accuracy >= 0.85);
    CHECK(out.test_accuracy >= 0.8);
}

TEST_CASE("input validation") {
    CircuitSpec c;
    c.n_qubits = 2;
    c.add_rotation(GateKind::RotY, 0);

    Dataset bad = dataset_from_rows(3, {{0.0, 0.0, 0.0}}, {0});
    CHECK_THROWS_AS((void)EmbeddedDataset::from(bad, 2), std::invalid_argument);

    const std::vector<double> short_x = {0.0};
    CHECK_THROWS_AS((void)predict_prob(c, std::span<const double>(short_x)),
                    std::invalid_argument);

    EmbeddedDataset empty;
    empty.n_qubits = 2;
    CHECK_THROWS_AS((void)evaluate_accuracy(c, empty), std::invalid_argument);
    CHECK_THROWS_AS((void)bce_loss(c, empty), std::invalid_argument);
    CHECK_THROWS_AS((void)param_shift_grad(c, empty), std::invalid_argument);

    CircuitSpec no_params;
    no_params.n_qubits = 2;
    no_params.add_cnot(0, 1);
    Dataset ok = dataset_from_rows(2, {{0.0, 0.0}}, {0});
    CHECK_THROWS_AS((void)param_shift_grad(no_params, EmbeddedDataset::from(ok, 2)),
                    std::invalid_argument);
}

}  // TEST_SUITE("vqc")
