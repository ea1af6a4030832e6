#include "qxai/explainers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "qxai/rng.hpp"

namespace qxai {

namespace {

void check_xb(const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  if (x.size() != b.size())
    throw std::invalid_argument("explain: input and baseline dimensions differ");
  if (x.size() == 0) throw std::invalid_argument("explain: empty input");
}

double shapley_weight(int subset_size, int n) {
  // |S|! (n-1-|S|)! / n!
  double w = 1.0;
  for (int i = 2; i <= subset_size; ++i) w *= i;
  for (int i = 2; i <= n - 1 - subset_size; ++i) w *= i;
  for (int i = 2; i <= n; ++i) w /= i;
  return w;
}

}  // namespace

AttributionResult integrated_gradients(const Model& f, const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& b, int mesh_N,
                                       const Eigen::VectorXd* delta) {
  check_xb(x, b);
  if (mesh_N < 2) throw std::invalid_argument("integrated_gradients: mesh_N must be >= 2");
  const int n = static_cast<int>(x.size());

  Eigen::VectorXd d(n);
  if (delta) {
    if (delta->size() != n)
      throw std::invalid_argument("integrated_gradients: delta dimension mismatch");
    if ((delta->array() <= 0.0).any())
      throw std::invalid_argument("integrated_gradients: delta must be positive");
    d = *delta;
  } else {
    for (int e = 0; e < n; ++e) d(e) = 1e-3 * std::max(1.0, std::abs(x(e) - b(e)));
  }

  AttributionResult result;
  result.method = "ig";
  result.values = Eigen::VectorXd::Zero(n);
  std::uint64_t evals = 0;
  for (int e = 0; e < n; ++e) {
    double sum = 0.0;
    for (int i = 1; i < mesh_N; ++i) {
      const double s = static_cast<double>(i) / mesh_N;
      Eigen::VectorXd gamma = s * x + (1.0 - s) * b;
      gamma(e) += d(e);
      const double hi = f(gamma);
      gamma(e) -= 2.0 * d(e);
      const double lo = f(gamma);
      evals += 2;
      sum += hi - lo;
    }
    result.values(e) = (x(e) - b(e)) / (2.0 * mesh_N * d(e)) * sum;
  }
  result.evaluations_used = evals;
  result.metadata["mesh"] = mesh_N;
  return result;
}

AttributionResult baseline_shap_exact(const Model& f, const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& b) {
  check_xb(x, b);
  const int n = static_cast<int>(x.size());
  if (n > 20)
    throw std::invalid_argument(
        "baseline_shap_exact: " + std::to_string(n) +
        " features would need 2^n evaluations; use permutation_shap instead");

  // One evaluation per box corner; corner bits select x over b.
  const std::uint32_t corners = 1u << n;
  std::vector<double> value(corners);
  Eigen::VectorXd point(n);
  for (std::uint32_t mask = 0; mask < corners; ++mask) {
    for (int i = 0; i < n; ++i) point(i) = (mask >> i) & 1u ? x(i) : b(i);
    value[mask] = f(point);
  }

  std::vector<double> weight(n);
  for (int s = 0; s < n; ++s) weight[s] = shapley_weight(s, n);

  AttributionResult result;
  result.method = "bs";
  result.values = Eigen::VectorXd::Zero(n);
  for (int e = 0; e < n; ++e) {
    const std::uint32_t bit = 1u << e;
    double acc = 0.0;
    for (std::uint32_t mask = 0; mask < corners; ++mask) {
      if (mask & bit) continue;
      acc += weight[std::popcount(mask)] * (value[mask | bit] - value[mask]);
    }
    result.values(e) = acc;
  }
  result.evaluations_used = corners;
  return result;
}

namespace {

double factorial_int(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

AttributionResult permutation_shap(const Model& f, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& b,
                                   const PermutationOptions& options) {
  check_xb(x, b);
  if (options.permutations < 1)
    throw std::invalid_argument("permutation_shap: permutations must be >= 1");
  const int n = static_cast<int>(x.size());

  const bool enumerate_all =
      n <= 10 && static_cast<double>(options.permutations) == factorial_int(n);

  std::unordered_map<std::uint32_t, double> memo;
  std::uint64_t evals = 0;
  Eigen::VectorXd point(n);
  auto corner = [&](std::uint32_t mask) {
    for (int i = 0; i < n; ++i) point(i) = (mask >> i) & 1u ? x(i) : b(i);
    return point;
  };
  auto value_at = [&](std::uint32_t mask) {
    if (options.resample_per_permutation) {
      ++evals;
      return f(corner(mask));
    }
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    ++evals;
    return memo.emplace(mask, f(corner(mask))).first->second;
  };

  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(options.seed, 0x5065726dULL);

  long long done = 0;
  const long long total = options.permutations;
  while (done < total) {
    if (!enumerate_all) {
      for (int i = n - 1; i > 0; --i)
        std::swap(perm[i], perm[static_cast<int>(rng.integer(i + 1))]);
    }
    std::uint32_t mask = 0;
    for (int t = 0; t < n; ++t) {
      const int e = perm[t];
      const double before = value_at(mask);
      mask |= 1u << e;
      acc(e) += value_at(mask) - before;
    }
    ++done;
    if (enumerate_all && !std::next_permutation(perm.begin(), perm.end())) break;
  }

  AttributionResult result;
  result.method = "perm";
  result.values = acc / static_cast<double>(done);
  result.evaluations_used = evals;
  result.seed = options.seed;
  result.metadata["permutations"] = done;
  result.metadata["resample"] = options.resample_per_permutation;
  return result;
}

AttributionResult qshap(const Model& f, const Eigen::VectorXd& x, const Eigen::VectorXd& b,
                        const QshapOptions& options) {
  check_xb(x, b);
  const int n = static_cast<int>(options.encoding_counts.size());
  if (x.size() != n)
    throw std::invalid_argument("qshap: encoding_counts must match the feature dimension");

  FrequencyLattice lattice{options.encoding_counts};
  FitOptions fit_options;
  fit_options.samples = options.samples;
  fit_options.strategy = options.strategy;
  fit_options.seed = options.seed;
  const FitResult fitted = fit(f, lattice, fit_options);

  // Rewriting around the box midpoint keeps |⟨ω, ψ⟩| small over the corners
  // the SHAP sums touch, which is where the truncated expansion must be good.
  const Eigen::VectorXd mid = (x + b) / 2.0;
  const FourierSeries centered = recenter(fitted.series, mid);

  ExpansionConfig config = options.expansion;
  if (config.scheme == ExpansionScheme::Chebyshev && config.domain_radius <= 0.0) {
    double radius = 0.0;
    const Eigen::VectorXd half_delta = ((x - b) / 2.0).cwiseAbs();
    for (const auto& term : centered.terms)
      radius = std::max(radius, term.omega.cast<double>().cwiseAbs().dot(half_delta));
    config.domain_radius = radius > 0.0 ? radius : std::numbers::pi;
  }
  const RankOnePoly poly = expand_series(centered, config);

  AttributionResult result = polynomial_shap(poly, x - mid, b - mid);
  result.method = "qshap";
  result.evaluations_used = fitted.samples_used;
  result.seed = options.seed;
  result.residual_rms = fitted.residual_rms;
  result.metadata["samples"] = fitted.samples_used;
  result.metadata["expansion"] =
      config.scheme == ExpansionScheme::Taylor ? "taylor" : "chebyshev";
  result.metadata["order"] = config.order;
  if (config.scheme == ExpansionScheme::Chebyshev)
    result.metadata["radius"] = config.domain_radius;
  return result;
}

}  // namespace qxai
