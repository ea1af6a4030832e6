#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace qxai {

enum class GateKind { RX, RY, RZ, CNOT };

// Where a rotation gate takes its angle from: a feature parameter, a
// trainable control parameter, or a fixed constant in radians.
struct AngleSource {
  enum class Kind { Feature, Control, Constant };

  Kind kind = Kind::Constant;
  int index = 0;
  double radians = 0.0;

  static AngleSource feature(int i) { return {Kind::Feature, i, 0.0}; }
  static AngleSource control(int j) { return {Kind::Control, j, 0.0}; }
  static AngleSource constant(double r) { return {Kind::Constant, 0, r}; }
};

struct GateOp {
  GateKind kind = GateKind::RX;
  int target = 0;
  int control = -1;  // CNOT only
  AngleSource angle;

  static GateOp rotation(GateKind k, int target, AngleSource a) {
    return {k, target, -1, a};
  }
  static GateOp cnot(int control, int target) {
    return {GateKind::CNOT, target, control, {}};
  }
  bool is_rotation() const { return kind != GateKind::CNOT; }
};

// Gate list defining a PQC classifier. Feature/control counts and per-feature
// encoding multiplicities are derived from the gate bindings.
struct CircuitSpec {
  int qubit_count = 1;
  int measured_qubit = 0;
  std::vector<GateOp> gates;

  int feature_count() const;
  int control_count() const;

  // Number of rotation gates bound to each feature (re-uploading count N_i).
  std::vector<int> encoding_multiplicity() const;

  // Throws std::invalid_argument on out-of-range qubit indices, CNOT with
  // control == target, sparse feature/control index sets, or an unused feature.
  void validate() const;
};

std::string gate_kind_name(GateKind k);

nlohmann::ordered_json circuit_to_json(const CircuitSpec& circuit);
CircuitSpec circuit_from_json(const nlohmann::json& j);

}  // namespace qxai
