#include <doctest.h>

#include <numbers>

#include "qxai/classifier.hpp"
#include "qxai/rng.hpp"

using namespace qxai;
constexpr double pi = std::numbers::pi;

TEST_CASE("dataset enumerates the four valid images") {
  const auto data = dataset();
  REQUIRE(data.size() == 4);
  bool bars_1010 = false, stripes_1100 = false;
  for (const auto& img : data) {
    const bool stripes = img.pixels[0] == img.pixels[1] && img.pixels[2] == img.pixels[3];
    const bool bars = img.pixels[0] == img.pixels[2] && img.pixels[1] == img.pixels[3];
    CHECK((img.label == ImageLabel::Stripes ? stripes : bars));
    // the constant images are excluded
    CHECK(!(stripes && bars));
    if (img.pixels == std::array<int, 4>{1, 0, 1, 0} && img.label == ImageLabel::Bars)
      bars_1010 = true;
    if (img.pixels == std::array<int, 4>{1, 1, 0, 0} && img.label == ImageLabel::Stripes)
      stripes_1100 = true;
  }
  CHECK(bars_1010);
  CHECK(stripes_1100);
}

TEST_CASE("reference circuits match the published layouts") {
  const CircuitSpec single = reference_circuit(CircuitKind::SingleQubit);
  CHECK(single.qubit_count == 1);
  CHECK(single.feature_count() == 2);
  CHECK(single.control_count() == 1);

  const CircuitSpec two = reference_circuit(CircuitKind::TwoQubit);
  CHECK(two.qubit_count == 2);
  CHECK(two.feature_count() == 2);
  CHECK(two.control_count() == 8);

  const CircuitSpec four = reference_circuit(CircuitKind::FourQubit);
  CHECK(four.qubit_count == 4);
  CHECK(four.feature_count() == 4);
  CHECK(four.control_count() == 16);
  CHECK(four.measured_qubit == 3);
  int cnots = 0;
  for (const auto& g : four.gates) cnots += g.kind == GateKind::CNOT;
  CHECK(cnots == 8);  // the ladder runs twice

  for (auto kind : {CircuitKind::SingleQubit, CircuitKind::TwoQubit, CircuitKind::FourQubit}) {
    const CircuitSpec c = reference_circuit(kind);
    for (int m : c.encoding_multiplicity()) CHECK(m == 1);
  }
}

TEST_CASE("circuit kind names round trip") {
  for (auto kind : {CircuitKind::SingleQubit, CircuitKind::TwoQubit, CircuitKind::FourQubit})
    CHECK(circuit_kind_from_name(circuit_kind_name(kind)) == kind);
  CHECK_THROWS_AS(circuit_kind_from_name("bogus"), std::invalid_argument);
}

TEST_CASE("parameter-shift gradients match central finite differences") {
  Rng rng(23);
  const double h = 1e-5;
  for (int trial = 0; trial < 50; ++trial) {
    const auto kind = std::array{CircuitKind::SingleQubit, CircuitKind::TwoQubit,
                                 CircuitKind::FourQubit}[trial % 3];
    const CircuitSpec c = reference_circuit(kind);
    Eigen::VectorXd phi(c.feature_count()), theta(c.control_count());
    for (int i = 0; i < phi.size(); ++i) phi(i) = rng.uniform(0, 2 * pi);
    for (int j = 0; j < theta.size(); ++j) theta(j) = rng.uniform(-pi, pi);

    const Eigen::VectorXd grad = parameter_shift_gradient(c, phi, theta);
    for (int j = 0; j < theta.size(); ++j) {
      Eigen::VectorXd up = theta, down = theta;
      up(j) += h;
      down(j) -= h;
      const double fd =
          (exact_expectation(c, phi, up) - exact_expectation(c, phi, down)) / (2 * h);
      CHECK(std::abs(grad(j) - fd) < 1e-6);
    }
  }
}

TEST_CASE("training the single-qubit classifier solves bars vs stripes") {
  TrainOptions opts;
  opts.seed = 7;
  const TrainResult result = train(reference_circuit(CircuitKind::SingleQubit), dataset(), opts);
  CHECK(result.accuracy == 1.0);
  CHECK(result.final_loss < 0.5);

  // XOR structure on the top row: sign alternates with pixel parity.
  const auto& m = result.model;
  Eigen::VectorXd img(4);
  for (int p0 : {0, 1})
    for (int p1 : {0, 1}) {
      img << p0, p1, 0, 0;
      const double f = m.predict(img);
      const double expected_sign = (p0 ^ p1) ? -1.0 : 1.0;  // bars when pixels differ
      CHECK(f * expected_sign > 0.0);
    }
}

TEST_CASE("training with zero epochs returns the seeded init unchanged") {
  TrainOptions opts;
  opts.seed = 5;
  opts.epochs = 0;
  const CircuitSpec c = reference_circuit(CircuitKind::TwoQubit);
  const TrainResult a = train(c, dataset(), opts);
  const TrainResult b = train(c, dataset(), opts);
  CHECK(a.model.controls == b.model.controls);
  CHECK(a.epochs_run == 0);
  CHECK(a.accuracy >= 0.0);  // reported, not required to be good
}

TEST_CASE("two- and four-qubit classifiers train to full accuracy") {
  TrainOptions opts;
  opts.seed = 7;
  opts.epochs = 400;
  const TrainResult two = train(reference_circuit(CircuitKind::TwoQubit), dataset(), opts);
  CHECK(two.accuracy == 1.0);

  const TrainResult four = train(reference_circuit(CircuitKind::FourQubit), dataset(), opts);
  CHECK(four.accuracy == 1.0);
}

TEST_CASE("model json round trip") {
  TrainOptions opts;
  opts.seed = 3;
  opts.epochs = 50;
  const TrainedModel m = train(reference_circuit(CircuitKind::SingleQubit), dataset(), opts).model;
  const TrainedModel back = model_from_json(model_to_json(m));
  CHECK(back.controls == m.controls);
  CHECK(back.scaling.zero == m.scaling.zero);
  CHECK(back.scaling.one == m.scaling.one);
  Eigen::VectorXd img(4);
  img << 1, 0, 1, 0;
  CHECK(back.predict(img) == m.predict(img));

  const auto j = model_to_json(m);
  CHECK(j.contains("circuit"));
  CHECK(j.contains("controls"));
  CHECK(j["scaling"]["one"] == doctest::Approx(pi));
}

TEST_CASE("image encoding counts mark unused pixels with zero") {
  TrainedModel m;
  m.circuit = reference_circuit(CircuitKind::TwoQubit);
  m.controls = Eigen::VectorXd::Zero(8);
  CHECK(m.image_encoding_counts() == std::vector<int>{1, 1, 0, 0});
  m.circuit = reference_circuit(CircuitKind::FourQubit);
  m.controls = Eigen::VectorXd::Zero(16);
  CHECK(m.image_encoding_counts() == std::vector<int>{1, 1, 1, 1});
}
