#pragma once

#include <string>
#include <vector>

#include "qxai/explainers.hpp"

namespace qxai {

// Empirical vs predicted attribution-error variance under iid zero-mean
// Gaussian evaluation noise. Aggregates are sums over features; the
// confidence band is a chi-square band (R-1 dof) on the empirical variance.
struct StabilityReport {
  std::string method;
  double sigma = 0.0;
  int scan_value = 0;  // IG mesh size N, or feature count n for SHAP
  int replications = 0;
  double empirical_var = 0.0;
  double predicted_var = 0.0;
  double ratio = 0.0;  // empirical / predicted
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  Eigen::VectorXd per_feature_empirical;
  Eigen::VectorXd per_feature_predicted;
};

// IG under noise for each mesh size: R replicates of the estimator on
// f_true + N(0, σ²) per call, variance measured around the noiseless value,
// prediction ((x_e-b_e)/(2Nδ_e))² · 2(N-1) · σ² from the estimator algebra.
// Requires R >= 30 and sigma >= 0.
std::vector<StabilityReport> ig_error_scan(const Model& f_true, const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& b, double sigma,
                                           const std::vector<int>& mesh_Ns, int R,
                                           std::uint64_t seed);

enum class ShapScanMode { Memoized, Resampled };

// Exact Baseline SHAP under noise for each feature count n (the leading n
// coordinates of x and b; remaining inputs pinned at the baseline).
// Memoized mode evaluates every corner once per replicate and is compared
// against the σ²/n asymptotic; resampled mode enumerates all n! permutations
// with fresh draws (n <= 8) and targets the 2σ²/n! regime.
std::vector<StabilityReport> shap_error_scan(const Model& f_true, const Eigen::VectorXd& x,
                                             const Eigen::VectorXd& b, double sigma,
                                             const std::vector<int>& n_features_list, int R,
                                             ShapScanMode mode, std::uint64_t seed);

// Header row plus one RFC-4180 row per report.
std::string reports_to_csv(const std::vector<StabilityReport>& reports);

}  // namespace qxai
