#include <doctest.h>

#include <complex>
#include <functional>
#include <numbers>

#include "qxai/rng.hpp"
#include "qxai/simulator.hpp"

using namespace qxai;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

// Dense-matrix oracle: builds the full 2^N x 2^N product from 2x2 blocks via
// Kronecker products, an independent route from the in-place kernels.
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::Matrix2cd rotation_block(GateKind kind, double t) {
  const double c = std::cos(t / 2), s = std::sin(t / 2);
  Eigen::Matrix2cd u;
  switch (kind) {
    case GateKind::RX: u << cd(c, 0), cd(0, -s), cd(0, -s), cd(c, 0); break;
    case GateKind::RY: u << cd(c, 0), cd(-s, 0), cd(s, 0), cd(c, 0); break;
    case GateKind::RZ: u << cd(c, -s), cd(0, 0), cd(0, 0), cd(c, s); break;
    default: REQUIRE(false);
  }
  return u;
}

Eigen::MatrixXcd dense_gate(int n_qubits, const GateOp& g, double angle) {
  const std::int64_t dim = std::int64_t(1) << n_qubits;
  if (g.kind == GateKind::CNOT) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::int64_t i = 0; i < dim; ++i) {
      std::int64_t j = i;
      if ((i >> g.control) & 1) j = i ^ (std::int64_t(1) << g.target);
      m(j, i) = 1.0;
    }
    return m;
  }
  Eigen::MatrixXcd m = rotation_block(g.kind, angle);
  if (g.target > 0) m = kron(m, Eigen::MatrixXcd::Identity(std::int64_t(1) << g.target,
                                                           std::int64_t(1) << g.target));
  const int high = n_qubits - 1 - g.target;
  if (high > 0)
    m = kron(Eigen::MatrixXcd::Identity(std::int64_t(1) << high, std::int64_t(1) << high), m);
  return m;
}

double dense_expectation(const CircuitSpec& c, const Eigen::VectorXd& angles) {
  const std::int64_t dim = std::int64_t(1) << c.qubit_count;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (std::size_t k = 0; k < c.gates.size(); ++k)
    u = dense_gate(c.qubit_count, c.gates[k], angles(k)) * u;
  Eigen::VectorXcd psi = u.col(0);  // U |0...0>
  double z = 0.0;
  for (std::int64_t i = 0; i < dim; ++i)
    z += std::norm(psi(i)) * ((i >> c.measured_qubit) & 1 ? -1.0 : 1.0);
  return z;
}

// Random circuit on constant angles, together with its unused angle slots.
CircuitSpec random_circuit(Rng& rng, Eigen::VectorXd& angles) {
  CircuitSpec c;
  c.qubit_count = 1 + static_cast<int>(rng.integer(4));
  c.measured_qubit = static_cast<int>(rng.integer(c.qubit_count));
  const int depth = 1 + static_cast<int>(rng.integer(20));
  angles.resize(depth);
  for (int k = 0; k < depth; ++k) {
    const int pick = static_cast<int>(rng.integer(c.qubit_count > 1 ? 4 : 3));
    angles(k) = rng.uniform(-2 * pi, 2 * pi);
    if (pick == 3) {
      const int control = static_cast<int>(rng.integer(c.qubit_count));
      int target = static_cast<int>(rng.integer(c.qubit_count - 1));
      if (target >= control) ++target;
      c.gates.push_back(GateOp::cnot(control, target));
      angles(k) = 0.0;
    } else {
      const GateKind kind = pick == 0 ? GateKind::RX : pick == 1 ? GateKind::RY : GateKind::RZ;
      c.gates.push_back(GateOp::rotation(kind, static_cast<int>(rng.integer(c.qubit_count)),
                                         AngleSource::constant(angles(k))));
    }
  }
  return c;
}

CircuitSpec rx_only_circuit(double angle) {
  CircuitSpec c;
  c.qubit_count = 1;
  c.gates = {GateOp::rotation(GateKind::RX, 0, AngleSource::constant(angle))};
  return c;
}

}  // namespace

TEST_CASE("rx gate on |0>") {
  Eigen::VectorXcd state = zero_state(1);

  SUBCASE("pi flips the bit up to phase") {
    state = apply_gate(state, GateOp::rotation(GateKind::RX, 0, {}), pi);
    CHECK(std::abs(state(0)) < 1e-15);
    CHECK(std::abs(state(1) - cd(0, -1)) < 1e-15);
  }
  SUBCASE("zero angle is the identity") {
    Eigen::VectorXcd out = apply_gate(state, GateOp::rotation(GateKind::RX, 0, {}), 0.0);
    CHECK((out - state).norm() == 0.0);
  }
  SUBCASE("pi/2 lands on the equator: <Z> = cos(phi)") {
    // analytic: RX(phi)|0> has <Z> = cos(phi)
    const Eigen::VectorXd none(0);
    CHECK(exact_expectation(rx_only_circuit(pi / 2), none, none) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(exact_expectation(rx_only_circuit(1.234), none, none) ==
          doctest::Approx(std::cos(1.234)).epsilon(1e-12));
  }
}

TEST_CASE("gate errors") {
  Eigen::VectorXcd state = zero_state(2);
  CHECK_THROWS_AS(apply_gate_in_place(state, GateOp::rotation(GateKind::RX, 5, {}), 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_gate_in_place(state, GateOp::cnot(1, 1), 0.0), std::invalid_argument);
  CircuitSpec c = rx_only_circuit(1.0);
  CHECK_THROWS_AS(evaluate(c, Eigen::VectorXd::Zero(3), Eigen::VectorXd(0)),
                  std::invalid_argument);
}

TEST_CASE("norm preserved after every gate") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd angles;
    const CircuitSpec c = random_circuit(rng, angles);
    Eigen::VectorXcd state = zero_state(c.qubit_count);
    for (std::size_t k = 0; k < c.gates.size(); ++k) {
      apply_gate_in_place(state, c.gates[k], angles(k));
      CHECK(state.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("simulator matches the dense matrix-product oracle") {
  Rng rng(7);
  const Eigen::VectorXd none(0);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd angles;
    CircuitSpec c = random_circuit(rng, angles);
    const double expected = dense_expectation(c, angles);
    const double got = exact_expectation(c, none, none);
    CHECK(got == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("single-qubit classifier circuit has the closed cos form") {
  // RX(phi0) RY(theta) RX(phi1) on |0>: <Z> = cos(phi0) cos(phi1) cos(theta)
  //                                           - sin(phi0) sin(phi1)
  CircuitSpec c;
  c.qubit_count = 1;
  c.gates = {GateOp::rotation(GateKind::RX, 0, AngleSource::feature(0)),
             GateOp::rotation(GateKind::RY, 0, AngleSource::control(0)),
             GateOp::rotation(GateKind::RX, 0, AngleSource::feature(1))};
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::VectorXd phi(2), theta(1);
    phi << rng.uniform(0, 2 * pi), rng.uniform(0, 2 * pi);
    theta << rng.uniform(0, 2 * pi);
    const double closed =
        std::cos(phi(0)) * std::cos(phi(1)) * std::cos(theta(0)) - std::sin(phi(0)) * std::sin(phi(1));
    CHECK(evaluate(c, phi, theta) == doctest::Approx(closed).epsilon(1e-12));
    // and against the dense product as well
    Eigen::VectorXd angles(3);
    angles << phi(0), theta(0), phi(1);
    CHECK(evaluate(c, phi, theta) == doctest::Approx(dense_expectation(c, angles)).epsilon(1e-12));
  }
}

TEST_CASE("exact mode is deterministic") {
  Rng rng(19);
  Eigen::VectorXd angles;
  const CircuitSpec c = random_circuit(rng, angles);
  const Eigen::VectorXd none(0);
  CHECK(evaluate(c, none, none) == evaluate(c, none, none));
}

TEST_CASE("shot mode estimates the exact expectation") {
  const CircuitSpec c = rx_only_circuit(pi / 2);
  const Eigen::VectorXd none(0);

  SUBCASE("10000 shots land within 3 binomial sigmas of 0") {
    NoiseSpec noise;
    noise.shots = 10000;
    noise.seed = 5;
    CHECK(std::abs(evaluate(c, none, none, noise)) < 0.03);  // 3/sqrt(10000)
  }
  SUBCASE("estimator is unbiased over 1000 repetitions") {
    NoiseSpec noise;
    noise.shots = 50;
    noise.seed = 42;
    const CircuitSpec biased = rx_only_circuit(1.1);
    const double z = std::cos(1.1);
    Eigen::MatrixXd rows(1000, 0);
    const Eigen::VectorXd estimates = evaluate_batch(biased, rows, none, noise);
    const double se = std::sqrt((1.0 - z * z) / 50.0 / 1000.0);
    CHECK(std::abs(estimates.mean() - z) < 4.0 * se);
  }
}

TEST_CASE("noise channel edge cases") {
  const CircuitSpec c = rx_only_circuit(0.7);
  const Eigen::VectorXd none(0);

  SUBCASE("all-zero channels with shots reduce to pure shot mode") {
    NoiseSpec a, b;
    a.shots = b.shots = 200;
    a.seed = b.seed = 9;
    b.depolarizing_p = 0.0;
    b.readout_flip_p = 0.0;
    b.additive_sigma = 0.0;
    CHECK(evaluate(c, none, none, a) == evaluate(c, none, none, b));
  }
  SUBCASE("no shots and zero channels reduce to exact mode") {
    NoiseSpec quiet;
    quiet.seed = 77;
    CHECK(evaluate(c, none, none, quiet) == exact_expectation(c, none, none));
  }
  SUBCASE("per-shot channels demand shot mode") {
    NoiseSpec bad;
    bad.depolarizing_p = 0.1;
    CHECK_THROWS_AS(evaluate(c, none, none, bad), std::invalid_argument);
  }
  SUBCASE("invalid parameters are rejected") {
    NoiseSpec bad;
    bad.depolarizing_p = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.additive_sigma = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.shots = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }
}

TEST_CASE("readout flips shrink the expectation toward zero") {
  // E[Z] under flip probability p is (1-2p) <Z>; check with many shots.
  const CircuitSpec c = rx_only_circuit(0.0);  // <Z> = 1
  const Eigen::VectorXd none(0);
  NoiseSpec noise;
  noise.shots = 200000;
  noise.readout_flip_p = 0.25;
  noise.seed = 8;
  CHECK(evaluate(c, none, none, noise) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("depolarizing trajectories damp a CNOT-heavy circuit") {
  // Bell-ish circuit measured on the target: exact value 1 without noise,
  // strictly less with p > 0.
  CircuitSpec c;
  c.qubit_count = 2;
  c.measured_qubit = 1;
  c.gates = {GateOp::rotation(GateKind::RX, 0, AngleSource::constant(0.0)),
             GateOp::cnot(0, 1)};
  const Eigen::VectorXd none(0);
  NoiseSpec noise;
  noise.shots = 5000;
  noise.depolarizing_p = 0.5;
  noise.seed = 4;
  const double noisy = evaluate(c, none, none, noise);
  CHECK(noisy < 0.9);
  CHECK(noisy > 0.0);  // 3/4 of Pauli pairs keep Z bias on average
}

TEST_CASE("batch evaluation") {
  const CircuitSpec c = rx_only_circuit(0.0);
  CircuitSpec feat;
  feat.qubit_count = 1;
  feat.gates = {GateOp::rotation(GateKind::RX, 0, AngleSource::feature(0))};
  const Eigen::VectorXd none(0);

  SUBCASE("batch of one equals evaluate") {
    Eigen::MatrixXd rows(1, 1);
    rows << 0.9;
    CHECK(evaluate_batch(feat, rows, none)(0) ==
          evaluate(feat, rows.row(0).transpose(), none));
  }
  SUBCASE("identical rows in exact mode give identical values") {
    Eigen::MatrixXd rows = Eigen::MatrixXd::Constant(5, 1, 0.4);
    const Eigen::VectorXd out = evaluate_batch(feat, rows, none);
    CHECK((out.array() == out(0)).all());
  }
  SUBCASE("shot variance across identical rows matches the Bernoulli formula") {
    NoiseSpec noise;
    noise.shots = 100;
    noise.seed = 21;
    Eigen::MatrixXd rows = Eigen::MatrixXd::Constant(2000, 1, 1.1);
    const Eigen::VectorXd out = evaluate_batch(feat, rows, none, noise);
    const double z = std::cos(1.1);
    const double expected_var = (1.0 - z * z) / 100.0;
    const double sample_var = (out.array() - out.mean()).square().sum() / (out.size() - 1);
    CHECK(sample_var == doctest::Approx(expected_var).epsilon(0.25));
  }
}

TEST_CASE("circuit json round trip holds the schema") {
  CircuitSpec c;
  c.qubit_count = 2;
  c.measured_qubit = 1;
  c.gates = {GateOp::rotation(GateKind::RX, 0, AngleSource::feature(0)),
             GateOp::rotation(GateKind::RY, 1, AngleSource::control(0)),
             GateOp::rotation(GateKind::RZ, 0, AngleSource::constant(1.5)),
             GateOp::cnot(0, 1)};
  const auto j = circuit_to_json(c);
  CHECK(j["qubits"] == 2);
  CHECK(j["measured"] == 1);
  CHECK(j["gates"][0] == nlohmann::ordered_json({{"kind", "RX"}, {"target", 0}, {"angle", {{"feature", 0}}}}));

  const CircuitSpec back = circuit_from_json(j);
  REQUIRE(back.gates.size() == c.gates.size());
  CHECK(back.qubit_count == c.qubit_count);
  CHECK(back.measured_qubit == c.measured_qubit);
  CHECK(back.gates[2].angle.radians == 1.5);
  CHECK(back.gates[3].control == 0);
  const Eigen::VectorXd phi = Eigen::VectorXd::Constant(1, 0.3);
  const Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, -0.2);
  CHECK(evaluate(back, phi, theta) == evaluate(c, phi, theta));
}

TEST_CASE("circuit validation rejects malformed specs") {
  CircuitSpec c;
  c.qubit_count = 1;
  c.gates = {GateOp::rotation(GateKind::RX, 0, AngleSource::feature(1))};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // feature 0 missing

  c.gates = {GateOp::rotation(GateKind::RX, 2, AngleSource::feature(0))};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // target out of range

  c.gates.clear();
  c.measured_qubit = 3;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("angle model shares its stream counter across copies") {
  CircuitSpec feat;
  feat.qubit_count = 1;
  feat.gates = {GateOp::rotation(GateKind::RX, 0, AngleSource::feature(0))};
  NoiseSpec noise;
  noise.shots = 50;
  noise.seed = 3;
  AngleModel model(feat, Eigen::VectorXd(0), noise, 2);

  std::function<double(const Eigen::VectorXd&)> fn = model;
  auto copy = fn;  // std::function copy keeps the shared counter
  Eigen::VectorXd phi(2);
  phi << 1.1, 9.9;  // second coordinate ignored
  const double first = copy(phi);
  const double second = copy(phi);
  CHECK(model.calls() == 2);
  // fresh stream per call: with so few shots a repeat is overwhelmingly distinct
  CHECK(first != second);
}
