#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>

#include "qxai/circuit.hpp"

namespace qxai {

// Parametric evaluation noise. `shots` absent means the exact expectation
// value. Depolarizing and readout channels act per shot, so they require
// shot mode; additive_sigma applies in both modes.
struct NoiseSpec {
  std::optional<int> shots;
  double depolarizing_p = 0.0;  // per two-qubit gate, Pauli-trajectory sampling
  double readout_flip_p = 0.0;  // per-shot bit flip on the measured qubit
  double additive_sigma = 0.0;  // zero-mean Gaussian added to the result
  std::uint64_t seed = 0;

  void validate() const;
  bool is_exact() const {
    return !shots && depolarizing_p == 0.0 && readout_flip_p == 0.0 && additive_sigma == 0.0;
  }
};

// |0...0⟩ over 2^qubit_count amplitudes, qubit q = bit q of the basis index.
Eigen::VectorXcd zero_state(int qubit_count);

// One gate application; `angle` must already be resolved to radians
// (ignored for CNOT). Convention: RX(t) = exp(-i t X / 2), likewise RY, RZ.
void apply_gate_in_place(Eigen::VectorXcd& state, const GateOp& gate, double angle);
Eigen::VectorXcd apply_gate(Eigen::VectorXcd state, const GateOp& gate, double angle);

// Noiseless ⟨Z⟩ on the measured qubit (|0⟩ ↦ +1). When shifted_gate >= 0,
// `shift` is added to that single gate's resolved angle, which is what the
// parameter-shift rule needs for controls bound to several gates.
double exact_expectation(const CircuitSpec& circuit, const Eigen::VectorXd& features,
                         const Eigen::VectorXd& controls, int shifted_gate = -1,
                         double shift = 0.0);

// ⟨Z⟩ under `noise`. Exact mode is deterministic; shot mode averages `shots`
// ±1 samples, with per-shot Pauli trajectories when depolarizing_p > 0.
// The RNG stream is derived from (noise.seed, stream).
double evaluate(const CircuitSpec& circuit, const Eigen::VectorXd& features,
                const Eigen::VectorXd& controls, const NoiseSpec& noise = {},
                std::uint64_t stream = 0);

// Row-wise evaluate; row i uses noise stream i, so shot draws are
// independent across rows but the batch is reproducible as a whole.
Eigen::VectorXd evaluate_batch(const CircuitSpec& circuit, const Eigen::MatrixXd& features,
                               const Eigen::VectorXd& controls, const NoiseSpec& noise = {});

// Callable view of one circuit over angle vectors. Input may be wider than
// feature_count (extra coordinates are ignored), which is how image-space
// explanations drive circuits that only encode a subset of the pixels.
// Every call consumes the next noise stream; the counter is shared across
// copies so wrapping in std::function keeps a single reproducible sequence.
class AngleModel {
 public:
  AngleModel(CircuitSpec circuit, Eigen::VectorXd controls, NoiseSpec noise = {},
             int input_dims = -1);

  double operator()(const Eigen::VectorXd& phi) const;

  const CircuitSpec& circuit() const { return *circuit_; }
  std::uint64_t calls() const { return counter_->load(); }

 private:
  std::shared_ptr<const CircuitSpec> circuit_;
  Eigen::VectorXd controls_;
  NoiseSpec noise_;
  int input_dims_;
  std::shared_ptr<std::atomic<std::uint64_t>> counter_;
};

}  // namespace qxai
