#include "qxai/circuit.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qxai {

namespace {

int max_index(const CircuitSpec& c, AngleSource::Kind kind) {
  int hi = -1;
  for (const auto& g : c.gates) {
    if (g.is_rotation() && g.angle.kind == kind) hi = std::max(hi, g.angle.index);
  }
  return hi;
}

}  // namespace

int CircuitSpec::feature_count() const {
  return max_index(*this, AngleSource::Kind::Feature) + 1;
}

int CircuitSpec::control_count() const {
  return max_index(*this, AngleSource::Kind::Control) + 1;
}

std::vector<int> CircuitSpec::encoding_multiplicity() const {
  std::vector<int> counts(feature_count(), 0);
  for (const auto& g : gates) {
    if (g.is_rotation() && g.angle.kind == AngleSource::Kind::Feature)
      counts[g.angle.index]++;
  }
  return counts;
}

void CircuitSpec::validate() const {
  if (qubit_count < 1) throw std::invalid_argument("circuit: qubit_count must be positive");
  if (measured_qubit < 0 || measured_qubit >= qubit_count)
    throw std::invalid_argument("circuit: measured_qubit out of range");
  std::set<int> features, controls;
  for (const auto& g : gates) {
    if (g.target < 0 || g.target >= qubit_count)
      throw std::invalid_argument("circuit: gate target out of range");
    if (g.kind == GateKind::CNOT) {
      if (g.control < 0 || g.control >= qubit_count)
        throw std::invalid_argument("circuit: CNOT control out of range");
      if (g.control == g.target)
        throw std::invalid_argument("circuit: CNOT control equals target");
    } else {
      if (g.angle.kind == AngleSource::Kind::Feature) features.insert(g.angle.index);
      if (g.angle.kind == AngleSource::Kind::Control) controls.insert(g.angle.index);
    }
  }
  // Dense index sets: every index below the max must be referenced.
  for (int i = 0; i < feature_count(); ++i)
    if (!features.count(i))
      throw std::invalid_argument("circuit: feature index " + std::to_string(i) +
                                  " never referenced");
  for (int j = 0; j < control_count(); ++j)
    if (!controls.count(j))
      throw std::invalid_argument("circuit: control index " + std::to_string(j) +
                                  " never referenced");
}

std::string gate_kind_name(GateKind k) {
  switch (k) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
  }
  return "?";
}

namespace {

GateKind gate_kind_from_name(const std::string& s) {
  if (s == "RX") return GateKind::RX;
  if (s == "RY") return GateKind::RY;
  if (s == "RZ") return GateKind::RZ;
  if (s == "CNOT") return GateKind::CNOT;
  throw std::invalid_argument("circuit json: unknown gate kind '" + s + "'");
}

}  // namespace

nlohmann::ordered_json circuit_to_json(const CircuitSpec& circuit) {
  nlohmann::ordered_json j;
  j["qubits"] = circuit.qubit_count;
  j["measured"] = circuit.measured_qubit;
  j["gates"] = nlohmann::ordered_json::array();
  for (const auto& g : circuit.gates) {
    nlohmann::ordered_json gj;
    gj["kind"] = gate_kind_name(g.kind);
    if (g.kind == GateKind::CNOT) gj["control"] = g.control;
    gj["target"] = g.target;
    if (g.is_rotation()) {
      switch (g.angle.kind) {
        case AngleSource::Kind::Feature: gj["angle"] = {{"feature", g.angle.index}}; break;
        case AngleSource::Kind::Control: gj["angle"] = {{"control", g.angle.index}}; break;
        case AngleSource::Kind::Constant: gj["angle"] = {{"constant", g.angle.radians}}; break;
      }
    }
    j["gates"].push_back(gj);
  }
  return j;
}

CircuitSpec circuit_from_json(const nlohmann::json& j) {
  CircuitSpec c;
  c.qubit_count = j.at("qubits").get<int>();
  c.measured_qubit = j.at("measured").get<int>();
  for (const auto& gj : j.at("gates")) {
    GateOp g;
    g.kind = gate_kind_from_name(gj.at("kind").get<std::string>());
    g.target = gj.at("target").get<int>();
    if (g.kind == GateKind::CNOT) {
      g.control = gj.at("control").get<int>();
    } else {
      const auto& aj = gj.at("angle");
      if (aj.contains("feature"))
        g.angle = AngleSource::feature(aj.at("feature").get<int>());
      else if (aj.contains("control"))
        g.angle = AngleSource::control(aj.at("control").get<int>());
      else if (aj.contains("constant"))
        g.angle = AngleSource::constant(aj.at("constant").get<double>());
      else
        throw std::invalid_argument("circuit json: angle must be feature/control/constant");
    }
    c.gates.push_back(g);
  }
  c.validate();
  return c;
}

}  // namespace qxai
