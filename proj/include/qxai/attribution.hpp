#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace qxai {

// Per-feature attribution vector plus bookkeeping shared by all explainers.
struct AttributionResult {
  Eigen::VectorXd values;
  std::string method;
  std::uint64_t evaluations_used = 0;  // model calls the method spent
  std::uint64_t seed = 0;
  std::optional<double> residual_rms;      // qSHAP: RMS of the Fourier fit
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
};

nlohmann::ordered_json attribution_to_json(const AttributionResult& result);
AttributionResult attribution_from_json(const nlohmann::json& j);

}  // namespace qxai
