#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "qxai/attribution.hpp"
#include "qxai/polytensor.hpp"

namespace qxai {

using Model = std::function<double(const Eigen::VectorXd&)>;

// Finite-difference Integrated Gradients on the straight path b → x with
// mesh_N interior nodes and per-axis shifts δ_e; end terms dropped:
//   IG(e) = (x_e-b_e)/(2 N δ_e) Σ_{i=1}^{N-1} f(γ_i + δ_e e) - f(γ_i - δ_e e).
// Default δ_e = 1e-3 · max(1, |x_e - b_e|). Spends 2(N-1)·n model calls.
AttributionResult integrated_gradients(const Model& f, const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& b, int mesh_N = 20,
                                       const Eigen::VectorXd* delta = nullptr);

// Exact Baseline SHAP by powerset enumeration with the standard Shapley
// kernel |S|!(n-1-|S|)!/n!; every box corner evaluated once (2^n calls).
// Capped at n <= 20; larger inputs are directed to permutation_shap.
AttributionResult baseline_shap_exact(const Model& f, const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& b);

struct PermutationOptions {
  int permutations = 100;
  std::uint64_t seed = 0;
  // true re-evaluates f at every visited corner (fresh noise draws, the
  // paper's inefficient-but-robust variant); false memoizes corners.
  bool resample_per_permutation = false;
};

// Permutation-form SHAP: average marginal contribution over sampled
// permutations. When permutations == n! and n <= 10 all permutations are
// enumerated instead of sampled, which makes the powerset identity exact.
AttributionResult permutation_shap(const Model& f, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& b, const PermutationOptions& options);

struct QshapOptions {
  std::vector<int> encoding_counts;  // per-feature N_i; 0 marks an unused feature
  int samples = 0;                   // 0 → fit default (3x coefficient count)
  ExpansionConfig expansion = ExpansionConfig::taylor(9);
  SampleStrategy strategy = SampleStrategy::UniformRandom;
  std::uint64_t seed = 0;
};

// The full pipeline: fit the truncated Fourier series of f on the lattice
// from encoding_counts (sampling [0, 2π)^n globally, independent of x and b),
// recenter at (x+b)/2, expand sin/cos to a rank-one polynomial, and apply
// closed-form polynomial SHAP at the recentered input/baseline. Reports the
// fit residual RMS and the sampling budget in the result.
AttributionResult qshap(const Model& f, const Eigen::VectorXd& x, const Eigen::VectorXd& b,
                        const QshapOptions& options);

}  // namespace qxai
