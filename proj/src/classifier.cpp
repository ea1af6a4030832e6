#include "qxai/classifier.hpp"

#include <stdexcept>

#include "qxai/rng.hpp"

namespace qxai {

std::vector<BarsStripesImage> dataset() {
  // Row-major 2x2: (p0 p1 / p2 p3). Bars are vertical, stripes horizontal.
  return {
      {{1, 0, 1, 0}, ImageLabel::Bars},
      {{0, 1, 0, 1}, ImageLabel::Bars},
      {{1, 1, 0, 0}, ImageLabel::Stripes},
      {{0, 0, 1, 1}, ImageLabel::Stripes},
  };
}

namespace {

using AS = AngleSource;

CircuitSpec single_qubit_circuit() {
  CircuitSpec c;
  c.qubit_count = 1;
  c.measured_qubit = 0;
  c.gates = {
      GateOp::rotation(GateKind::RX, 0, AS::feature(0)),
      GateOp::rotation(GateKind::RY, 0, AS::control(0)),
      GateOp::rotation(GateKind::RX, 0, AS::feature(1)),
  };
  return c;
}

CircuitSpec two_qubit_circuit() {
  CircuitSpec c;
  c.qubit_count = 2;
  c.measured_qubit = 1;
  c.gates = {
      GateOp::rotation(GateKind::RX, 0, AS::feature(0)),
      GateOp::rotation(GateKind::RX, 1, AS::feature(1)),
      GateOp::rotation(GateKind::RY, 0, AS::control(0)),
      GateOp::rotation(GateKind::RY, 1, AS::control(1)),
      GateOp::cnot(0, 1),
      GateOp::rotation(GateKind::RY, 0, AS::control(2)),
      GateOp::rotation(GateKind::RY, 1, AS::control(3)),
      GateOp::rotation(GateKind::RX, 0, AS::control(4)),
      GateOp::rotation(GateKind::RX, 1, AS::control(5)),
      GateOp::cnot(0, 1),
      GateOp::rotation(GateKind::RY, 0, AS::control(6)),
      GateOp::rotation(GateKind::RY, 1, AS::control(7)),
  };
  return c;
}

CircuitSpec four_qubit_circuit() {
  // RX(φ0..φ3) | RY(θ0..θ3) | ladder | RY(θ4..θ7) RX(θ8..θ11) | ladder | RY(θ12..θ15)
  CircuitSpec c;
  c.qubit_count = 4;
  c.measured_qubit = 3;
  auto ry_layer = [&](int first) {
    for (int q = 0; q < 4; ++q)
      c.gates.push_back(GateOp::rotation(GateKind::RY, q, AS::control(first + q)));
  };
  auto ladder = [&] {
    c.gates.push_back(GateOp::cnot(0, 1));
    c.gates.push_back(GateOp::cnot(0, 2));
    c.gates.push_back(GateOp::cnot(1, 3));
    c.gates.push_back(GateOp::cnot(2, 3));
  };
  for (int q = 0; q < 4; ++q)
    c.gates.push_back(GateOp::rotation(GateKind::RX, q, AS::feature(q)));
  ry_layer(0);
  ladder();
  ry_layer(4);
  for (int q = 0; q < 4; ++q)
    c.gates.push_back(GateOp::rotation(GateKind::RX, q, AS::control(8 + q)));
  ladder();
  ry_layer(12);
  return c;
}

}  // namespace

CircuitSpec reference_circuit(CircuitKind kind) {
  CircuitSpec c;
  switch (kind) {
    case CircuitKind::SingleQubit: c = single_qubit_circuit(); break;
    case CircuitKind::TwoQubit: c = two_qubit_circuit(); break;
    case CircuitKind::FourQubit: c = four_qubit_circuit(); break;
  }
  c.validate();
  return c;
}

const char* circuit_kind_name(CircuitKind kind) {
  switch (kind) {
    case CircuitKind::SingleQubit: return "single-qubit";
    case CircuitKind::TwoQubit: return "two-qubit";
    case CircuitKind::FourQubit: return "four-qubit";
  }
  return "?";
}

CircuitKind circuit_kind_from_name(const std::string& name) {
  if (name == "single-qubit") return CircuitKind::SingleQubit;
  if (name == "two-qubit") return CircuitKind::TwoQubit;
  if (name == "four-qubit") return CircuitKind::FourQubit;
  throw std::invalid_argument("unknown circuit kind '" + name + "'");
}

Eigen::VectorXd TrainedModel::circuit_angles(const Eigen::VectorXd& pixels) const {
  const int n = circuit.feature_count();
  if (pixels.size() < n)
    throw std::invalid_argument("model: pixel vector smaller than circuit feature count");
  return scaling.angles(pixels.head(n));
}

double TrainedModel::predict(const Eigen::VectorXd& pixels, const NoiseSpec& noise) const {
  return evaluate(circuit, circuit_angles(pixels), controls, noise);
}

double TrainedModel::accuracy(const std::vector<BarsStripesImage>& data) const {
  int correct = 0;
  for (const auto& img : data) {
    const double f = predict(img.pixel_vector());
    if (f * img.target() > 0.0) ++correct;
  }
  return data.empty() ? 0.0 : static_cast<double>(correct) / data.size();
}

std::vector<int> TrainedModel::image_encoding_counts(int pixel_count) const {
  const std::vector<int> mult = circuit.encoding_multiplicity();
  std::vector<int> counts(pixel_count, 0);
  for (std::size_t i = 0; i < mult.size() && i < counts.size(); ++i) counts[i] = mult[i];
  return counts;
}

AngleModel TrainedModel::angle_model(const NoiseSpec& noise, int pixel_count) const {
  return AngleModel(circuit, controls, noise, pixel_count);
}

nlohmann::ordered_json model_to_json(const TrainedModel& model) {
  nlohmann::ordered_json j;
  j["circuit"] = circuit_to_json(model.circuit);
  j["controls"] = std::vector<double>(model.controls.begin(), model.controls.end());
  j["scaling"] = {{"zero", model.scaling.zero}, {"one", model.scaling.one}};
  return j;
}

TrainedModel model_from_json(const nlohmann::json& j) {
  TrainedModel m;
  m.circuit = circuit_from_json(j.at("circuit"));
  const auto controls = j.at("controls").get<std::vector<double>>();
  m.controls = Eigen::Map<const Eigen::VectorXd>(controls.data(), controls.size());
  if (m.controls.size() != m.circuit.control_count())
    throw std::invalid_argument("model json: control vector length mismatch");
  m.scaling.zero = j.at("scaling").at("zero").get<double>();
  m.scaling.one = j.at("scaling").at("one").get<double>();
  return m;
}

Eigen::VectorXd parameter_shift_gradient(const CircuitSpec& circuit,
                                         const Eigen::VectorXd& features,
                                         const Eigen::VectorXd& controls) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(circuit.control_count());
  for (std::size_t k = 0; k < circuit.gates.size(); ++k) {
    const GateOp& g = circuit.gates[k];
    if (!g.is_rotation() || g.angle.kind != AngleSource::Kind::Control) continue;
    const double plus = exact_expectation(circuit, features, controls, int(k), half_pi);
    const double minus = exact_expectation(circuit, features, controls, int(k), -half_pi);
    grad(g.angle.index) += (plus - minus) / 2.0;
  }
  return grad;
}

TrainResult train(const CircuitSpec& circuit, const std::vector<BarsStripesImage>& data,
                  const TrainOptions& options) {
  circuit.validate();
  const int n_controls = circuit.control_count();

  TrainedModel model;
  model.circuit = circuit;
  // Start away from 0 (zero gradients for some circuits) and away from the
  // ±π saddles of the squared loss.
  Rng rng(options.seed);
  model.controls = Eigen::VectorXd::NullaryExpr(
      n_controls, [&](Eigen::Index) { return rng.uniform(-std::numbers::pi / 2, std::numbers::pi / 2); });

  auto loss_of = [&](const Eigen::VectorXd& theta) {
    double loss = 0.0;
    for (const auto& img : data) {
      const Eigen::VectorXd phi = model.scaling.angles(
          img.pixel_vector().head(circuit.feature_count()));
      const double r = exact_expectation(circuit, phi, theta) - img.target();
      loss += r * r;
    }
    return loss;
  };

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(n_controls);
    for (const auto& img : data) {
      const Eigen::VectorXd phi = model.scaling.angles(
          img.pixel_vector().head(circuit.feature_count()));
      const double f = exact_expectation(circuit, phi, model.controls);
      grad += 2.0 * (f - img.target()) *
              parameter_shift_gradient(circuit, phi, model.controls);
    }
    model.controls -= options.lr * grad;
  }

  TrainResult result;
  result.model = model;
  result.accuracy = model.accuracy(data);
  result.final_loss = loss_of(model.controls);
  result.epochs_run = options.epochs;
  return result;
}

}  // namespace qxai
