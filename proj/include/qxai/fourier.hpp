#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include <json.hpp>

namespace qxai {

// Integer frequency box Ω = ∏_i [-N_i, N_i]. Since the sin/cos basis makes
// ω and -ω redundant, only canonical representatives are enumerated: ω = 0
// plus, for each ± pair, the member whose first nonzero component is positive.
struct FrequencyLattice {
  std::vector<int> bounds;  // N_i >= 0 per feature

  int feature_count() const { return static_cast<int>(bounds.size()); }
  long long size() const;  // |Ω| = ∏ (2 N_i + 1)

  // ω = 0 first, then the half lattice in odometer order.
  std::vector<Eigen::VectorXi> canonical_frequencies() const;

  // Free coefficients of the series on this lattice: b_0 plus (a_ω, b_ω) per
  // canonical nonzero ω.
  int coefficient_count() const { return static_cast<int>(size()); }
};

struct FourierTerm {
  Eigen::VectorXi omega;
  double a = 0.0;  // sine coefficient (0 for ω = 0)
  double b = 0.0;  // cosine coefficient
};

// f(φ) = Σ a_ω sin⟨ω,φ⟩ + b_ω cos⟨ω,φ⟩ over canonical terms.
struct FourierSeries {
  int feature_count = 0;
  std::vector<FourierTerm> terms;

  double eval(const Eigen::VectorXd& phi) const;
};

double eval_series(const FourierSeries& series, const Eigen::VectorXd& phi);

enum class SampleStrategy { UniformRandom, RegularGrid };

struct FitOptions {
  int samples = 0;  // 0 → 3x the coefficient count
  SampleStrategy strategy = SampleStrategy::UniformRandom;
  std::uint64_t seed = 0;
};

struct FitResult {
  FourierSeries series;
  double residual_rms = 0.0;  // RMS of the least-squares residual on the sample set
  int samples_used = 0;
};

using ModelFn = std::function<double(const Eigen::VectorXd&)>;

// Least-squares fit of the truncated series to `model` sampled over [0, 2π)^n.
// Throws std::invalid_argument when samples < coefficient_count (the message
// names the required count) and std::runtime_error when the design matrix is
// rank-deficient (suggesting RegularGrid).
FitResult fit(const ModelFn& model, const FrequencyLattice& lattice,
              const FitOptions& options = {});

// Terms with max(|a|, |b|) < threshold removed.
FourierSeries prune(const FourierSeries& series, double threshold);

// Exact rewrite in ψ = φ - center: same lattice, rotated coefficients.
// SHAP values are translation invariant, so explaining at (x - c, b - c)
// against the recentered series equals explaining at (x, b) against the
// original; recentering only shrinks |⟨ω, ψ⟩| seen by a later expansion.
FourierSeries recenter(const FourierSeries& series, const Eigen::VectorXd& center);

nlohmann::ordered_json series_to_json(const FourierSeries& series);
FourierSeries series_from_json(const nlohmann::json& j);

}  // namespace qxai
