#include "qxai/simulator.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "qxai/rng.hpp"

namespace qxai {

using cd = std::complex<double>;

void NoiseSpec::validate() const {
  if (shots && *shots < 1) throw std::invalid_argument("noise: shots must be positive");
  if (depolarizing_p < 0.0 || depolarizing_p > 1.0)
    throw std::invalid_argument("noise: depolarizing_p must be in [0,1]");
  if (readout_flip_p < 0.0 || readout_flip_p > 1.0)
    throw std::invalid_argument("noise: readout_flip_p must be in [0,1]");
  if (additive_sigma < 0.0) throw std::invalid_argument("noise: additive_sigma must be >= 0");
}

Eigen::VectorXcd zero_state(int qubit_count) {
  if (qubit_count < 1) throw std::invalid_argument("state: qubit_count must be positive");
  Eigen::VectorXcd state = Eigen::VectorXcd::Zero(std::int64_t(1) << qubit_count);
  state(0) = 1.0;
  return state;
}

namespace {

void apply_single_qubit(Eigen::VectorXcd& state, int qubit, cd u00, cd u01, cd u10, cd u11) {
  const std::int64_t n = state.size();
  const std::int64_t mask = std::int64_t(1) << qubit;
  for (std::int64_t i = 0; i < n; ++i) {
    if (i & mask) continue;
    const cd a = state(i);
    const cd b = state(i | mask);
    state(i) = u00 * a + u01 * b;
    state(i | mask) = u10 * a + u11 * b;
  }
}

void apply_cnot(Eigen::VectorXcd& state, int control, int target) {
  const std::int64_t n = state.size();
  const std::int64_t cmask = std::int64_t(1) << control;
  const std::int64_t tmask = std::int64_t(1) << target;
  for (std::int64_t i = 0; i < n; ++i) {
    if ((i & cmask) && !(i & tmask)) std::swap(state(i), state(i | tmask));
  }
}

// 0=I, 1=X, 2=Y, 3=Z; used by the depolarizing trajectories.
void apply_pauli(Eigen::VectorXcd& state, int qubit, int which) {
  switch (which) {
    case 0: return;
    case 1: apply_single_qubit(state, qubit, 0, 1, 1, 0); return;
    case 2: apply_single_qubit(state, qubit, 0, cd(0, -1), cd(0, 1), 0); return;
    case 3: apply_single_qubit(state, qubit, 1, 0, 0, -1); return;
    default: throw std::logic_error("apply_pauli: bad index");
  }
}

double resolve_angle(const GateOp& g, const Eigen::VectorXd& features,
                     const Eigen::VectorXd& controls) {
  switch (g.angle.kind) {
    case AngleSource::Kind::Feature: return features(g.angle.index);
    case AngleSource::Kind::Control: return controls(g.angle.index);
    case AngleSource::Kind::Constant: return g.angle.radians;
  }
  return 0.0;
}

void check_dims(const CircuitSpec& circuit, const Eigen::VectorXd& features,
                const Eigen::VectorXd& controls) {
  if (features.size() != circuit.feature_count())
    throw std::invalid_argument("evaluate: feature vector has dimension " +
                                std::to_string(features.size()) + ", circuit expects " +
                                std::to_string(circuit.feature_count()));
  if (controls.size() != circuit.control_count())
    throw std::invalid_argument("evaluate: control vector has dimension " +
                                std::to_string(controls.size()) + ", circuit expects " +
                                std::to_string(circuit.control_count()));
}

// One pass through the circuit. When rng != nullptr and depolarizing_p > 0,
// each CNOT is followed with probability p by a uniformly random Pauli pair
// on (control, target) — one trajectory of the depolarizing channel.
Eigen::VectorXcd run_circuit(const CircuitSpec& circuit, const Eigen::VectorXd& features,
                             const Eigen::VectorXd& controls, int shifted_gate, double shift,
                             Rng* rng, double depolarizing_p) {
  Eigen::VectorXcd state = zero_state(circuit.qubit_count);
  for (std::size_t k = 0; k < circuit.gates.size(); ++k) {
    const GateOp& g = circuit.gates[k];
    double angle = g.is_rotation() ? resolve_angle(g, features, controls) : 0.0;
    if (static_cast<int>(k) == shifted_gate) angle += shift;
    apply_gate_in_place(state, g, angle);
    if (g.kind == GateKind::CNOT && rng && depolarizing_p > 0.0 &&
        rng->bernoulli(depolarizing_p)) {
      const int pauli = static_cast<int>(rng->integer(16));
      apply_pauli(state, g.control, pauli / 4);
      apply_pauli(state, g.target, pauli % 4);
    }
  }
  return state;
}

double prob_one(const Eigen::VectorXcd& state, int qubit) {
  const std::int64_t mask = std::int64_t(1) << qubit;
  double p = 0.0;
  for (std::int64_t i = 0; i < state.size(); ++i) {
    if (i & mask) p += std::norm(state(i));
  }
  return p;
}

bool has_cnot(const CircuitSpec& circuit) {
  for (const auto& g : circuit.gates)
    if (g.kind == GateKind::CNOT) return true;
  return false;
}

}  // namespace

void apply_gate_in_place(Eigen::VectorXcd& state, const GateOp& gate, double angle) {
  const std::int64_t n = state.size();
  if (gate.target < 0 || (std::int64_t(1) << gate.target) >= n)
    throw std::invalid_argument("apply_gate: target out of range");
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  switch (gate.kind) {
    case GateKind::RX:
      apply_single_qubit(state, gate.target, c, cd(0, -s), cd(0, -s), c);
      break;
    case GateKind::RY:
      apply_single_qubit(state, gate.target, c, -s, s, c);
      break;
    case GateKind::RZ:
      apply_single_qubit(state, gate.target, cd(c, -s), 0, 0, cd(c, s));
      break;
    case GateKind::CNOT:
      if (gate.control < 0 || (std::int64_t(1) << gate.control) >= n)
        throw std::invalid_argument("apply_gate: control out of range");
      if (gate.control == gate.target)
        throw std::invalid_argument("apply_gate: control equals target");
      apply_cnot(state, gate.control, gate.target);
      break;
  }
}

Eigen::VectorXcd apply_gate(Eigen::VectorXcd state, const GateOp& gate, double angle) {
  apply_gate_in_place(state, gate, angle);
  return state;
}

double exact_expectation(const CircuitSpec& circuit, const Eigen::VectorXd& features,
                         const Eigen::VectorXd& controls, int shifted_gate, double shift) {
  check_dims(circuit, features, controls);
  Eigen::VectorXcd state =
      run_circuit(circuit, features, controls, shifted_gate, shift, nullptr, 0.0);
  return 1.0 - 2.0 * prob_one(state, circuit.measured_qubit);
}

double evaluate(const CircuitSpec& circuit, const Eigen::VectorXd& features,
                const Eigen::VectorXd& controls, const NoiseSpec& noise, std::uint64_t stream) {
  noise.validate();
  check_dims(circuit, features, controls);

  if (!noise.shots) {
    if (noise.depolarizing_p > 0.0 || noise.readout_flip_p > 0.0)
      throw std::invalid_argument(
          "evaluate: depolarizing/readout channels act per shot; set shots");
    double z = exact_expectation(circuit, features, controls);
    if (noise.additive_sigma > 0.0)
      z += Rng(noise.seed, stream).gaussian(0.0, noise.additive_sigma);
    return z;
  }

  Rng rng(noise.seed, stream);
  const int shots = *noise.shots;
  const bool trajectories = noise.depolarizing_p > 0.0 && has_cnot(circuit);
  std::int64_t ones = 0;

  if (trajectories) {
    for (int s = 0; s < shots; ++s) {
      Eigen::VectorXcd state =
          run_circuit(circuit, features, controls, -1, 0.0, &rng, noise.depolarizing_p);
      bool bit = rng.bernoulli(prob_one(state, circuit.measured_qubit));
      if (noise.readout_flip_p > 0.0 && rng.bernoulli(noise.readout_flip_p)) bit = !bit;
      ones += bit;
    }
  } else {
    const Eigen::VectorXcd state =
        run_circuit(circuit, features, controls, -1, 0.0, nullptr, 0.0);
    const double p1 = prob_one(state, circuit.measured_qubit);
    for (int s = 0; s < shots; ++s) {
      bool bit = rng.bernoulli(p1);
      if (noise.readout_flip_p > 0.0 && rng.bernoulli(noise.readout_flip_p)) bit = !bit;
      ones += bit;
    }
  }

  double z = 1.0 - 2.0 * static_cast<double>(ones) / shots;
  if (noise.additive_sigma > 0.0) z += rng.gaussian(0.0, noise.additive_sigma);
  return z;
}

Eigen::VectorXd evaluate_batch(const CircuitSpec& circuit, const Eigen::MatrixXd& features,
                               const Eigen::VectorXd& controls, const NoiseSpec& noise) {
  Eigen::VectorXd out(features.rows());
  for (Eigen::Index i = 0; i < features.rows(); ++i)
    out(i) = evaluate(circuit, features.row(i).transpose(), controls, noise,
                      static_cast<std::uint64_t>(i));
  return out;
}

AngleModel::AngleModel(CircuitSpec circuit, Eigen::VectorXd controls, NoiseSpec noise,
                       int input_dims)
    : circuit_(std::make_shared<const CircuitSpec>(std::move(circuit))),
      controls_(std::move(controls)),
      noise_(noise),
      input_dims_(input_dims),
      counter_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
  noise_.validate();
  if (input_dims_ < 0) input_dims_ = circuit_->feature_count();
  if (input_dims_ < circuit_->feature_count())
    throw std::invalid_argument("AngleModel: input_dims below circuit feature count");
}

double AngleModel::operator()(const Eigen::VectorXd& phi) const {
  if (phi.size() != input_dims_)
    throw std::invalid_argument("AngleModel: input has dimension " +
                                std::to_string(phi.size()) + ", expected " +
                                std::to_string(input_dims_));
  const std::uint64_t stream = counter_->fetch_add(1);
  return evaluate(*circuit_, phi.head(circuit_->feature_count()), controls_, noise_, stream);
}

}  // namespace qxai
