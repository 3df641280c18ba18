#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qarch/rng.hpp"
#include "qarch/statevector.hpp"

using namespace qarch::qsim;
using qarch::Rng;
using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

namespace {

// Dense-matrix oracle: builds the full 2^n x 2^n unitary for each gate and
// multiplies it into the vector. Deliberately naive.
using Matrix = std::vector<std::vector<Complex>>;

Matrix rotation_2x2(GateKind kind, double angle) {
    const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
    switch (kind) {
        case GateKind::RotX: return {{Complex(c, 0), Complex(0, -s)}, {Complex(0, -s), Complex(c, 0)}};
        case GateKind::RotY: return {{Complex(c, 0), Complex(-s, 0)}, {Complex(s, 0), Complex(c, 0)}};
        default: return {{std::exp(Complex(0, -angle / 2.0)), 0.0}, {0.0, std::exp(Complex(0, angle / 2.0))}};
    }
}

Matrix kron(const Matrix& a, const Matrix& b) {
    const std::size_t ar = a.size(), ac = a[0].size(), br = b.size(), bc = b[0].size();
    Matrix out(ar * br, std::vector<Complex>(ac * bc));
    for (std::size_t i = 0; i < ar; ++i)
        for (std::size_t j = 0; j < ac; ++j)
            for (std::size_t k = 0; k < br; ++k)
                for (std::size_t l = 0; l < bc; ++l) out[i * br + k][j * bc + l] = a[i][j] * b[k][l];
    return out;
}

Matrix identity(std::size_t n) {
    Matrix out(n, std::vector<Complex>(n));
    for (std::size_t i = 0; i < n; ++i) out[i][i] = 1.0;
    return out;
}

// qubit 0 is the most significant bit, i.e. the leftmost Kronecker factor
Matrix gate_matrix(const GateOp& g, int n_qubits) {
    if (g.is_rotation()) {
        Matrix m = identity(1);
        for (int q = 0; q < n_qubits; ++q)
            m = kron(m, q == g.target ? rotation_2x2(g.kind, g.angle) : identity(2));
        return m;
    }
    const std::size_t dim = std::size_t{1} << n_qubits;
    const std::size_t cmask = std::size_t{1} << (n_qubits - 1 - g.control);
    const std::size_t tmask = std::size_t{1} << (n_qubits - 1 - g.target);
    Matrix m(dim, std::vector<Complex>(dim));
    for (std::size_t b = 0; b < dim; ++b) m[(b & cmask) ? (b ^ tmask) : b][b] = 1.0;
    return m;
}

std::vector<Complex> matvec(const Matrix& m, const std::vector<Complex>& v) {
    std::vector<Complex> out(v.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        Complex acc = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) acc += m[i][j] * v[j];
        out[i] = acc;
    }
    return out;
}

std::vector<Complex> oracle_run(int n_qubits, const std::vector<GateOp>& gates) {
    std::vector<Complex> v(std::size_t{1} << n_qubits, 0.0);
    v[0] = 1.0;
    for (const GateOp& g : gates) v = matvec(gate_matrix(g, n_qubits), v);
    return v;
}

std::vector<GateOp> random_circuit(Rng& rng, int n_qubits, int n_gates) {
    std::vector<GateOp> gates;
    for (int i = 0; i < n_gates; ++i) {
        const bool want_cnot = n_qubits >= 2 && rng.uniform() < 0.3;
        if (want_cnot) {
            const int c = static_cast<int>(rng.uniform_int(n_qubits));
            int t = static_cast<int>(rng.uniform_int(n_qubits - 1));
            if (t >= c) ++t;
            gates.push_back(GateOp::cnot(c, t));
        } else {
            const GateKind kinds[] = {GateKind::RotX, GateKind::RotY, GateKind::RotZ};
            gates.push_back(GateOp::rotation(kinds[rng.uniform_int(3)],
                                             static_cast<int>(rng.uniform_int(n_qubits)),
                                             rng.uniform(-kPi, kPi)));
        }
    }
    return gates;
}

}  // namespace

TEST_SUITE("qsim") {

TEST_CASE("zero state puts unit amplitude on the first basis vector") {
    const Statevector one = zero_state(1);
    REQUIRE(one.dim() == 2);
    CHECK(one.amp(0) == Complex(1.0, 0.0));
    CHECK(one.amp(1) == Complex(0.0, 0.0));

    const Statevector two = zero_state(2);
    REQUIRE(two.dim() == 4);
    CHECK(two.amp(0) == Complex(1.0, 0.0));
    for (std::size_t i = 1; i < 4; ++i) CHECK(two.amp(i) == Complex(0.0, 0.0));

    CHECK_THROWS_AS(zero_state(0), std::invalid_argument);
    CHECK_THROWS_AS(zero_state(15), std::invalid_argument);
}

TEST_CASE("rx pi maps |0> to -i|1>") {
    const Statevector s = apply_gate(zero_state(1), GateOp::rot_x(0, kPi));
    CHECK(std::abs(s.amp(0)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.amp(1).real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.amp(1).imag() == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("ry pi/2 creates the equal superposition with real amplitudes") {
    const Statevector s = apply_gate(zero_state(1), GateOp::rot_y(0, kPi / 2));
    const double r = std::sqrt(2.0) / 2.0;
    CHECK(s.amp(0).real() == doctest::Approx(r));
    CHECK(s.amp(0).imag() == doctest::Approx(0.0));
    CHECK(s.amp(1).real() == doctest::Approx(r));
    CHECK(s.amp(1).imag() == doctest::Approx(0.0));
}

TEST_CASE("cnot flips the target exactly when the control is set") {
    // |10>: qubit 0 (MSB) set -> index 2
    Statevector s = zero_state(2);
    s.amp(0) = 0.0;
    s.amp(2) = 1.0;
    s.apply(GateOp::cnot(0, 1));
    CHECK(std::abs(s.amp(3) - Complex(1.0, 0.0)) < 1e-15);  // |11>
    CHECK(std::abs(s.amp(2)) < 1e-15);

    // control clear: |01> stays |01>
    Statevector t = zero_state(2);
    t.amp(0) = 0.0;
    t.amp(1) = 1.0;
    t.apply(GateOp::cnot(0, 1));
    CHECK(std::abs(t.amp(1) - Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("qubit 0 is the most significant bit of the basis index") {
    Statevector s = zero_state(2);
    s.apply(GateOp::rot_x(0, kPi));  // flips qubit 0
    CHECK(std::abs(s.amp(2)) == doctest::Approx(1.0));
    CHECK(s.amp(2).imag() == doctest::Approx(-1.0));
}

TEST_CASE("empty circuit is the identity") {
    const Statevector in = apply_gate(zero_state(2), GateOp::rot_y(1, 0.7));
    const Statevector out = apply_circuit(in, {});
    for (std::size_t i = 0; i < in.dim(); ++i) CHECK(in.amp(i) == out.amp(i));
}

TEST_CASE("two rx pi make a global phase of -1 and leave Z unchanged") {
    const std::vector<GateOp> gates = {GateOp::rot_x(0, kPi), GateOp::rot_x(0, kPi)};
    const Statevector s = apply_circuit(zero_state(1), gates);
    CHECK(s.amp(0).real() == doctest::Approx(-1.0));
    CHECK(std::abs(s.amp(1)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.expectation_z(0) == doctest::Approx(1.0));
}

TEST_CASE("z expectation on basis and equator states") {
    const Statevector zero = zero_state(1);
    CHECK(zero.expectation_z(0) == doctest::Approx(1.0));

    const Statevector flipped = apply_gate(zero, GateOp::rot_x(0, kPi));
    CHECK(flipped.expectation_z(0) == doctest::Approx(-1.0));

    const Statevector equator = apply_gate(zero, GateOp::rot_y(0, kPi / 2));
    CHECK(equator.expectation_z(0) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));

    const Statevector multi = zero_state(3);
    for (int q = 0; q < 3; ++q) CHECK(multi.expectation_z(q) == doctest::Approx(1.0));
}

TEST_CASE("rotation followed by its inverse restores the state") {
    Rng rng(5);
    Statevector s = zero_state(3);
    s.apply(GateOp::rot_y(0, 0.3));
    s.apply(GateOp::rot_x(2, -1.1));
    const std::vector<Complex> before(s.amplitudes().begin(), s.amplitudes().end());
    for (int i = 0; i < 20; ++i) {
        const GateKind kinds[] = {GateKind::RotX, GateKind::RotY, GateKind::RotZ};
        const GateOp g = GateOp::rotation(kinds[rng.uniform_int(3)],
                                          static_cast<int>(rng.uniform_int(3)),
                                          rng.uniform(-kPi, kPi));
        s.apply(g);
        s.apply(GateOp::rotation(g.kind, g.target, -g.angle));
    }
    for (std::size_t i = 0; i < s.dim(); ++i) CHECK(std::abs(s.amp(i) - before[i]) < 1e-12);
}

TEST_CASE("random circuits match the dense-unitary oracle") {
    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform_int(4));
        const int n_gates = 1 + static_cast<int>(rng.uniform_int(12));
        const std::vector<GateOp> gates = random_circuit(rng, n, n_gates);

        const Statevector fast = apply_circuit(zero_state(n), gates);
        const std::vector<Complex> slow = oracle_run(n, gates);

        REQUIRE(fast.dim() == slow.size());
        for (std::size_t i = 0; i < slow.size(); ++i)
            REQUIRE(std::abs(fast.amp(i) - slow[i]) < 1e-10);
        REQUIRE(std::abs(fast.norm_sq() - 1.0) < 1e-9);
    }
}

TEST_CASE("out of range qubit indices are rejected") {
    Statevector s = zero_state(2);
    CHECK_THROWS_AS(s.apply(GateOp::rot_x(2, 0.1)), std::out_of_range);
    CHECK_THROWS_AS(s.apply(GateOp::rot_x(-1, 0.1)), std::out_of_range);
    CHECK_THROWS_AS(s.apply(GateOp::cnot(0, 2)), std::out_of_range);
    CHECK_THROWS_AS(s.expectation_z(5), std::out_of_range);
}

TEST_CASE("cnot with equal control and target is rejected") {
    Statevector s = zero_state(2);
    CHECK_THROWS_AS(s.apply(GateOp::cnot(1, 1)), std::invalid_argument);
}

}  // TEST_SUITE
