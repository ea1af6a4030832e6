#include "qxai/polytensor.hpp"

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>

namespace qxai {

namespace {

double ipow(double base, int exp) {
  double out = 1.0;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t mid = v.size() / 2;
  return pairwise_sum(v.first(mid)) + pairwise_sum(v.subspan(mid));
}

}  // namespace

int RankOnePoly::max_order() const {
  int r = 0;
  for (const auto& t : terms) r = std::max(r, t.order);
  return r;
}

namespace {

// Monomial coefficients (ascending degree, length K+1) of the degree-<=K
// Chebyshev projection of fn on [-R, R], via discrete cosine projection at
// K+1 Chebyshev nodes and the T_j recurrence.
std::vector<double> chebyshev_monomial_coeffs(double (*fn)(double), int K, double R) {
  const int m = K + 1;
  std::vector<double> cheb(m, 0.0);
  for (int j = 0; j < m; ++j) {
    double acc = 0.0;
    for (int q = 0; q < m; ++q) {
      const double theta = std::numbers::pi * (q + 0.5) / m;
      acc += fn(R * std::cos(theta)) * std::cos(j * theta);
    }
    cheb[j] = 2.0 * acc / m;
  }
  cheb[0] *= 0.5;

  // T_0 = 1, T_1 = u, T_{j+1} = 2u T_j - T_{j-1}; u = t / R.
  std::vector<std::vector<double>> T(m);
  T[0] = {1.0};
  if (m > 1) T[1] = {0.0, 1.0};
  for (int j = 2; j < m; ++j) {
    T[j].assign(j + 1, 0.0);
    for (int d = 0; d < j; ++d) T[j][d + 1] += 2.0 * T[j - 1][d];
    for (std::size_t d = 0; d < T[j - 2].size(); ++d) T[j][d] -= T[j - 2][d];
  }

  std::vector<double> mono(m, 0.0);
  for (int j = 0; j < m; ++j)
    for (std::size_t d = 0; d < T[j].size(); ++d) mono[d] += cheb[j] * T[j][d];
  for (int d = 0; d < m; ++d) mono[d] /= ipow(R, d);

  // The projection leaves ~1e-17 residue on the wrong-parity degrees.
  double scale = 0.0;
  for (double c : mono) scale = std::max(scale, std::abs(c));
  for (double& c : mono)
    if (std::abs(c) < 1e-14 * scale) c = 0.0;
  return mono;
}

}  // namespace

RankOnePoly expand_series(const FourierSeries& series, const ExpansionConfig& config,
                          std::vector<std::string>* warnings) {
  if (config.order < 0) throw std::invalid_argument("expand: order must be >= 0");
  const int K = config.order;

  std::vector<double> sin_coef(K + 1, 0.0), cos_coef(K + 1, 0.0);
  if (config.scheme == ExpansionScheme::Taylor) {
    for (int d = 0; d <= K; ++d) {
      const double c = 1.0 / factorial(d);
      if (d % 2 == 1)
        sin_coef[d] = ((d - 1) / 2 % 2 == 0 ? c : -c);
      else
        cos_coef[d] = (d / 2 % 2 == 0 ? c : -c);
    }
  } else {
    if (config.domain_radius <= 0.0)
      throw std::invalid_argument("expand: Chebyshev needs domain_radius > 0");
    sin_coef = chebyshev_monomial_coeffs(std::sin, K, config.domain_radius);
    cos_coef = chebyshev_monomial_coeffs(std::cos, K, config.domain_radius);
  }
  if (warnings) {
    for (int d = 0; d <= K; ++d) {
      const bool sin_gone = d % 2 == 1 && sin_coef[d] == 0.0;
      const bool cos_gone = d % 2 == 0 && d > 0 && cos_coef[d] == 0.0;
      if (sin_gone || cos_gone)
        warnings->push_back("expansion coefficient at degree " + std::to_string(d) +
                            " underflowed to zero");
    }
  }

  RankOnePoly poly;
  poly.feature_count = series.feature_count;
  double constant = 0.0;
  for (const auto& t : series.terms) {
    if (t.omega.isZero()) {
      constant += t.b;  // sin 0 = 0
      continue;
    }
    const Eigen::VectorXd dir = t.omega.cast<double>();
    for (int d = 0; d <= K; ++d) {
      const double w = t.a * sin_coef[d] + t.b * cos_coef[d];
      if (w == 0.0) continue;
      if (d == 0)
        constant += w;
      else
        poly.terms.push_back({d, w, dir});
    }
  }
  if (constant != 0.0)
    poly.terms.insert(poly.terms.begin(),
                      {0, constant, Eigen::VectorXd::Zero(poly.feature_count)});
  return poly;
}

double eval_poly(const RankOnePoly& poly, const Eigen::VectorXd& x) {
  if (x.size() != poly.feature_count)
    throw std::invalid_argument("eval_poly: input has dimension " + std::to_string(x.size()) +
                                ", expected " + std::to_string(poly.feature_count));
  std::vector<double> parts;
  parts.reserve(poly.terms.size());
  for (const auto& t : poly.terms)
    parts.push_back(t.order == 0 ? t.weight : t.weight * ipow(t.direction.dot(x), t.order));
  return pairwise_sum(parts);
}

namespace {

// Σ_{|γ|=k over the support coordinates} (k; γ) / (odd(γ)+1) Π t_h^{γ_h},
// by DFS over exponent assignments with the multinomial built incrementally.
double gamma_sum(std::span<const double> t, int k, ShapStats* stats) {
  if (k == 0) {
    if (stats) stats->inner_terms++;
    return 1.0;
  }
  if (t.empty()) return 0.0;

  double total = 0.0;
  // (coord index, remaining budget, multinomial so far, product so far, odd count)
  auto dfs = [&](auto&& self, std::size_t idx, int rem, double coeff, double prod,
                 int odd) -> void {
    if (idx + 1 == t.size()) {
      if (stats) stats->inner_terms++;
      const int g = rem;
      total += coeff * prod * ipow(t[idx], g) / ((odd + (g % 2)) + 1);
      return;
    }
    for (int g = 0; g <= rem; ++g)
      self(self, idx + 1, rem - g, coeff * binomial(rem, g), prod * ipow(t[idx], g),
           odd + (g % 2));
  };
  dfs(dfs, 0, k, 1.0, 1.0, 0);
  return total;
}

}  // namespace

AttributionResult polynomial_shap(const RankOnePoly& poly, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& b, ShapStats* stats) {
  const int n = poly.feature_count;
  if (x.size() != n || b.size() != n)
    throw std::invalid_argument("polynomial_shap: x/b dimension mismatch");

  AttributionResult result;
  result.method = "polynomial_shap";
  result.values = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd delta = x - b;
  if (delta.isZero(0.0)) return result;  // x = b: every attribution is zero
  const Eigen::VectorXd mid = (x + b) / 2.0;

  std::vector<double> support;
  std::vector<double> parts;
  for (int e = 0; e < n; ++e) {
    parts.clear();
    for (const auto& term : poly.terms) {
      const int r = term.order;
      if (r == 0) continue;
      const double de = term.direction(e) * delta(e) / 2.0;
      if (de == 0.0) continue;  // dummy axis: no odd power, exact zero
      const double vm = term.direction.dot(mid);

      support.clear();
      for (int h = 0; h < n; ++h) {
        if (h == e) continue;
        const double th = term.direction(h) * delta(h) / 2.0;
        if (th != 0.0) support.push_back(th);
      }

      for (int m = 1; m <= r; m += 2) {
        const double dm = ipow(de, m);
        for (int k = 0; m + k <= r; k += 2) {
          const int j = r - m - k;
          const double mult = factorial(r) / (factorial(j) * factorial(m) * factorial(k));
          const double g = gamma_sum(support, k, stats);
          if (g == 0.0) continue;
          parts.push_back(2.0 * mult * term.weight * ipow(vm, j) * dm * g);
        }
      }
    }
    result.values(e) = pairwise_sum(parts);
  }
  return result;
}

AttributionResult shap_quadratic(const Eigen::MatrixXd& C, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& b) {
  const Eigen::Index n = C.rows();
  if (C.cols() != n) throw std::invalid_argument("shap_quadratic: C must be square");
  if (x.size() != n || b.size() != n)
    throw std::invalid_argument("shap_quadratic: x/b dimension mismatch");
  if (((C - C.transpose()).array().abs() > 1e-12).any())
    throw std::invalid_argument("shap_quadratic: C must be symmetric (tolerance 1e-12)");

  AttributionResult result;
  result.method = "shap_quadratic";
  // Sh(e) = 2 Mᵀ C Δ_e with Δ_e the e-axis restriction of x - b.
  result.values = (2.0 * (C * ((x + b) / 2.0)).array() * (x - b).array()).matrix();
  return result;
}

RankOnePoly poly_from_monomials(int feature_count,
                                const std::map<std::vector<int>, double>& monomials) {
  RankOnePoly poly;
  poly.feature_count = feature_count;
  double constant = 0.0;
  for (const auto& [gamma, coef] : monomials) {
    if (static_cast<int>(gamma.size()) != feature_count)
      throw std::invalid_argument("poly_from_monomials: exponent vector length mismatch");
    if (coef == 0.0) continue;
    int k = 0;
    for (int g : gamma) {
      if (g < 0) throw std::invalid_argument("poly_from_monomials: negative exponent");
      k += g;
    }
    if (k == 0) {
      constant += coef;
      continue;
    }
    // Odometer over all s <= gamma componentwise.
    std::vector<int> s(gamma.size(), 0);
    const double inv_kfact = 1.0 / factorial(k);
    while (true) {
      int abs_s = 0;
      double choose = 1.0;
      for (std::size_t h = 0; h < s.size(); ++h) {
        abs_s += s[h];
        choose *= binomial(gamma[h], s[h]);
      }
      if (abs_s > 0) {
        const double w = coef * inv_kfact * choose * ((k - abs_s) % 2 == 0 ? 1.0 : -1.0);
        Eigen::VectorXd dir(feature_count);
        for (int h = 0; h < feature_count; ++h) dir(h) = s[h];
        poly.terms.push_back({k, w, dir});
      }
      std::size_t d = 0;
      while (d < s.size() && s[d] == gamma[d]) s[d++] = 0;
      if (d == s.size()) break;
      s[d]++;
    }
  }
  if (constant != 0.0)
    poly.terms.insert(poly.terms.begin(),
                      {0, constant, Eigen::VectorXd::Zero(feature_count)});
  return poly;
}

nlohmann::ordered_json poly_to_json(const RankOnePoly& poly) {
  nlohmann::ordered_json j;
  j["n"] = poly.feature_count;
  j["terms"] = nlohmann::ordered_json::array();
  for (const auto& t : poly.terms) {
    nlohmann::ordered_json tj;
    tj["k"] = t.order;
    tj["lambda"] = t.weight;
    tj["v"] = std::vector<double>(t.direction.begin(), t.direction.end());
    j["terms"].push_back(tj);
  }
  return j;
}

RankOnePoly poly_from_json(const nlohmann::json& j) {
  RankOnePoly p;
  p.feature_count = j.at("n").get<int>();
  for (const auto& tj : j.at("terms")) {
    RankOneTerm t;
    t.order = tj.at("k").get<int>();
    t.weight = tj.at("lambda").get<double>();
    const auto v = tj.at("v").get<std::vector<double>>();
    if (static_cast<int>(v.size()) != p.feature_count)
      throw std::invalid_argument("poly json: direction length mismatch");
    t.direction = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
    p.terms.push_back(t);
  }
  return p;
}

}  // namespace qxai
