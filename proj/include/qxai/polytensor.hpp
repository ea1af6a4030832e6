#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qxai/attribution.hpp"
#include "qxai/fourier.hpp"

namespace qxai {

// One λ · ⟨v, x⟩^k summand. Order-0 terms carry the constant in `weight`
// with a zero direction.
struct RankOneTerm {
  int order = 0;
  double weight = 0.0;
  Eigen::VectorXd direction;
};

// Multivariate polynomial as a sum of weighted powers of linear forms —
// the rank-one decomposition of its symmetric coefficient tensors.
struct RankOnePoly {
  int feature_count = 0;
  std::vector<RankOneTerm> terms;

  int max_order() const;
};

enum class ExpansionScheme { Taylor, Chebyshev };

struct ExpansionConfig {
  ExpansionScheme scheme = ExpansionScheme::Taylor;
  int order = 9;             // K: highest polynomial degree kept
  double domain_radius = 0;  // Chebyshev only: sin/cos approximated on [-R, R]

  static ExpansionConfig taylor(int order) { return {ExpansionScheme::Taylor, order, 0.0}; }
  static ExpansionConfig chebyshev(int order, double radius) {
    return {ExpansionScheme::Chebyshev, order, radius};
  }
};

// Replaces each sin/cos term of the series by a degree-<=K polynomial in
// t = ⟨ω, φ⟩ (Taylor about 0, or Chebyshev projection on [-R, R] mapped to
// monomials), emitting rank-one terms with direction ω. ω = 0 becomes an
// order-0 constant. Chebyshev coefficients that underflow are reported on
// the warning channel, never as errors.
RankOnePoly expand_series(const FourierSeries& series, const ExpansionConfig& config,
                          std::vector<std::string>* warnings = nullptr);

// Σ λ ⟨v, x⟩^k, pairwise-summed over terms.
double eval_poly(const RankOnePoly& poly, const Eigen::VectorXd& x);

struct ShapStats {
  std::uint64_t inner_terms = 0;  // innermost accumulations across the triple sum
};

// Closed-form Baseline SHAP of a rank-one polynomial. Per order-r term the
// attribution for feature e is
//
//   2 Σ_{j+m+k=r, m odd, k even} (r; j,m,k) λ ⟨v,M⟩^j (v_e Δ_e/2)^m
//       Σ_{|γ|=k, γ_e=0} (k; γ) / (odd(γ)+1) Π_h (v_h Δ_h/2)^{γ_h}
//
// with M = (x+b)/2 and Δ = x-b. The constant conventions (Δ/2 in the γ
// product, γ skipping e, the odd-exponent-count weight) are locked by
// exhaustive agreement with brute-force powerset SHAP in the test suite.
AttributionResult polynomial_shap(const RankOnePoly& poly, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& b, ShapStats* stats = nullptr);

// Baseline SHAP of f(x) = xᵀCx for symmetric C: Sh(e) = 2 Mᵀ C Δ_e.
AttributionResult shap_quadratic(const Eigen::MatrixXd& C, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& b);

// Dense monomial map {exponents γ: coefficient} → rank-one form via the
// polarization identity Π x_h^{γ_h} = (1/k!) Σ_{s<=γ} (-1)^{k-|s|} Π C(γ_h,s_h) ⟨s,x⟩^k.
RankOnePoly poly_from_monomials(int feature_count,
                                const std::map<std::vector<int>, double>& monomials);

nlohmann::ordered_json poly_to_json(const RankOnePoly& poly);
RankOnePoly poly_from_json(const nlohmann::json& j);

}  // namespace qxai
