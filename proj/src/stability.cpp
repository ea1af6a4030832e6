#include "qxai/stability.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "qxai/rng.hpp"

namespace qxai {

namespace {

// Acklam's rational approximation of the standard normal quantile.
double normal_quantile(double p) {
  if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("normal_quantile: p in (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) return -normal_quantile(1.0 - p);
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Wilson-Hilferty chi-square quantile; fine for the dof >= 29 used here.
double chi_square_quantile(double p, int dof) {
  const double z = normal_quantile(p);
  const double t = 1.0 - 2.0 / (9.0 * dof) + z * std::sqrt(2.0 / (9.0 * dof));
  return dof * t * t * t;
}

void finish_report(StabilityReport& report, int R) {
  report.replications = R;
  report.empirical_var = report.per_feature_empirical.sum();
  report.predicted_var = report.per_feature_predicted.sum();
  report.ratio = report.predicted_var > 0.0 ? report.empirical_var / report.predicted_var : 0.0;
  const int dof = R - 1;
  report.ci_lo = dof * report.empirical_var / chi_square_quantile(0.975, dof);
  report.ci_hi = dof * report.empirical_var / chi_square_quantile(0.025, dof);
}

void check_scan_args(double sigma, int R) {
  if (sigma < 0.0) throw std::invalid_argument("stability: sigma must be >= 0");
  if (R < 30) throw std::invalid_argument("stability: at least 30 replications required");
}

}  // namespace

std::vector<StabilityReport> ig_error_scan(const Model& f_true, const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& b, double sigma,
                                           const std::vector<int>& mesh_Ns, int R,
                                           std::uint64_t seed) {
  check_scan_args(sigma, R);
  const int n = static_cast<int>(x.size());

  std::vector<StabilityReport> reports;
  for (std::size_t scan = 0; scan < mesh_Ns.size(); ++scan) {
    const int mesh_N = mesh_Ns[scan];
    if (mesh_N < 2) throw std::invalid_argument("ig_error_scan: mesh sizes must be >= 2");

    const Eigen::VectorXd clean = integrated_gradients(f_true, x, b, mesh_N).values;
    Eigen::VectorXd sq = Eigen::VectorXd::Zero(n);
    for (int rep = 0; rep < R; ++rep) {
      Rng rng(seed, stream_seed(scan, rep));
      const Model noisy = [&](const Eigen::VectorXd& v) {
        return f_true(v) + rng.gaussian(0.0, sigma);
      };
      const Eigen::VectorXd values = integrated_gradients(noisy, x, b, mesh_N).values;
      sq += (values - clean).cwiseAbs2();
    }

    StabilityReport report;
    report.method = "ig";
    report.sigma = sigma;
    report.scan_value = mesh_N;
    report.per_feature_empirical = sq / R;
    report.per_feature_predicted = Eigen::VectorXd::Zero(n);
    for (int e = 0; e < n; ++e) {
      const double delta = 1e-3 * std::max(1.0, std::abs(x(e) - b(e)));
      const double pre = (x(e) - b(e)) / (2.0 * mesh_N * delta);
      report.per_feature_predicted(e) = pre * pre * 2.0 * (mesh_N - 1) * sigma * sigma;
    }
    finish_report(report, R);
    reports.push_back(std::move(report));
  }
  return reports;
}

std::vector<StabilityReport> shap_error_scan(const Model& f_true, const Eigen::VectorXd& x,
                                             const Eigen::VectorXd& b, double sigma,
                                             const std::vector<int>& n_features_list, int R,
                                             ShapScanMode mode, std::uint64_t seed) {
  check_scan_args(sigma, R);

  std::vector<StabilityReport> reports;
  for (std::size_t scan = 0; scan < n_features_list.size(); ++scan) {
    const int n = n_features_list[scan];
    if (n < 1 || n > static_cast<int>(x.size()))
      throw std::invalid_argument("shap_error_scan: feature count out of range");
    if (n > 12) throw std::invalid_argument("shap_error_scan: feature counts capped at 12");
    if (mode == ShapScanMode::Resampled && n > 8)
      throw std::invalid_argument(
          "shap_error_scan: resampled mode enumerates n! permutations; capped at 8");

    // The leading n coordinates vary; the rest stay at the baseline.
    const Model reduced = [&](const Eigen::VectorXd& v) {
      Eigen::VectorXd full = b;
      full.head(n) = v;
      return f_true(full);
    };
    const Eigen::VectorXd xs = x.head(n);
    const Eigen::VectorXd bs = b.head(n);
    const Eigen::VectorXd clean = baseline_shap_exact(reduced, xs, bs).values;

    double perm_count = 1.0;
    for (int i = 2; i <= n; ++i) perm_count *= i;

    Eigen::VectorXd sq = Eigen::VectorXd::Zero(n);
    for (int rep = 0; rep < R; ++rep) {
      Rng rng(seed, stream_seed(scan, rep));
      const Model noisy = [&](const Eigen::VectorXd& v) {
        return reduced(v) + rng.gaussian(0.0, sigma);
      };
      Eigen::VectorXd values;
      if (mode == ShapScanMode::Memoized) {
        values = baseline_shap_exact(noisy, xs, bs).values;
      } else {
        PermutationOptions po;
        po.permutations = static_cast<int>(perm_count);
        po.resample_per_permutation = true;
        po.seed = stream_seed(seed, stream_seed(scan, rep));
        values = permutation_shap(noisy, xs, bs, po).values;
      }
      sq += (values - clean).cwiseAbs2();
    }

    StabilityReport report;
    report.method = mode == ShapScanMode::Memoized ? "bs-memoized" : "bs-resampled";
    report.sigma = sigma;
    report.scan_value = n;
    report.per_feature_empirical = sq / R;
    const double predicted = mode == ShapScanMode::Memoized
                                 ? sigma * sigma / n
                                 : 2.0 * sigma * sigma / perm_count;
    report.per_feature_predicted = Eigen::VectorXd::Constant(n, predicted);
    finish_report(report, R);
    reports.push_back(std::move(report));
  }
  return reports;
}

std::string reports_to_csv(const std::vector<StabilityReport>& reports) {
  std::string out = "method,sigma,N_or_n,empirical_var,predicted_var,ratio,ci_lo,ci_hi\n";
  char line[256];
  for (const auto& r : reports) {
    std::snprintf(line, sizeof(line), "%s,%.12g,%d,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                  r.method.c_str(), r.sigma, r.scan_value, r.empirical_var, r.predicted_var,
                  r.ratio, r.ci_lo, r.ci_hi);
    out += line;
  }
  return out;
}

}  // namespace qxai
