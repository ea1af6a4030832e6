#include "qxai/attribution.hpp"

namespace qxai {

nlohmann::ordered_json attribution_to_json(const AttributionResult& result) {
  nlohmann::ordered_json j;
  j["method"] = result.method;
  j["values"] = std::vector<double>(result.values.begin(), result.values.end());
  j["evaluations"] = result.evaluations_used;
  j["seed"] = result.seed;
  if (result.residual_rms) j["residual_rms"] = *result.residual_rms;
  if (!result.metadata.empty()) j["config"] = result.metadata;
  return j;
}

AttributionResult attribution_from_json(const nlohmann::json& j) {
  AttributionResult r;
  r.method = j.at("method").get<std::string>();
  const auto values = j.at("values").get<std::vector<double>>();
  r.values = Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
  r.evaluations_used = j.at("evaluations").get<std::uint64_t>();
  r.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("residual_rms")) r.residual_rms = j.at("residual_rms").get<double>();
  if (j.contains("config")) r.metadata = j.at("config");
  return r;
}

}  // namespace qxai
