#include "qxai/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qxai/rng.hpp"

namespace qxai {

long long FrequencyLattice::size() const {
  long long total = 1;
  for (int b : bounds) {
    if (b < 0) throw std::invalid_argument("lattice: bounds must be >= 0");
    total *= 2LL * b + 1;
  }
  return total;
}

std::vector<Eigen::VectorXi> FrequencyLattice::canonical_frequencies() const {
  const int n = feature_count();
  std::vector<Eigen::VectorXi> out;
  out.push_back(Eigen::VectorXi::Zero(n));

  Eigen::VectorXi omega(n);
  for (int i = 0; i < n; ++i) omega(i) = -bounds[i];
  while (true) {
    // Canonical: first nonzero component positive.
    for (int i = 0; i < n; ++i) {
      if (omega(i) > 0) {
        out.push_back(omega);
        break;
      }
      if (omega(i) < 0) break;
    }
    int d = n - 1;
    while (d >= 0 && omega(d) == bounds[d]) {
      omega(d) = -bounds[d];
      --d;
    }
    if (d < 0) break;
    omega(d)++;
  }
  return out;
}

double FourierSeries::eval(const Eigen::VectorXd& phi) const {
  if (phi.size() != feature_count)
    throw std::invalid_argument("series: input has dimension " + std::to_string(phi.size()) +
                                ", expected " + std::to_string(feature_count));
  double sum = 0.0;
  for (const auto& t : terms) {
    const double arg = t.omega.cast<double>().dot(phi);
    sum += t.a * std::sin(arg) + t.b * std::cos(arg);
  }
  return sum;
}

double eval_series(const FourierSeries& series, const Eigen::VectorXd& phi) {
  return series.eval(phi);
}

namespace {

Eigen::MatrixXd sample_points(const FrequencyLattice& lattice, int count,
                              SampleStrategy strategy, std::uint64_t seed) {
  const int n = lattice.feature_count();
  constexpr double two_pi = 2.0 * std::numbers::pi;
  Eigen::MatrixXd pts(count, n);

  if (strategy == SampleStrategy::UniformRandom) {
    Rng rng(seed, 0x466f75ULL);
    for (int i = 0; i < count; ++i)
      for (int d = 0; d < n; ++d) pts(i, d) = rng.uniform(0.0, two_pi);
    return pts;
  }

  // Regular tensor grid: at least 2N_i + 1 nodes per dimension (DFT
  // orthogonality makes the design matrix well conditioned), grown evenly
  // until the grid covers the requested sample count.
  std::vector<long long> sizes(n);
  for (int d = 0; d < n; ++d) sizes[d] = 2LL * lattice.bounds[d] + 1;
  auto total = [&] {
    long long t = 1;
    for (long long s : sizes) t *= s;
    return t;
  };
  while (total() < count) {
    auto smallest = std::min_element(sizes.begin(), sizes.end());
    (*smallest)++;
  }
  const long long grid = total();
  pts.resize(grid, n);
  for (long long i = 0; i < grid; ++i) {
    long long rest = i;
    for (int d = 0; d < n; ++d) {
      const long long idx = rest % sizes[d];
      rest /= sizes[d];
      pts(i, d) = two_pi * static_cast<double>(idx) / static_cast<double>(sizes[d]);
    }
  }
  return pts;
}

}  // namespace

FitResult fit(const ModelFn& model, const FrequencyLattice& lattice, const FitOptions& options) {
  const int unknowns = lattice.coefficient_count();
  int samples = options.samples > 0 ? options.samples : 3 * unknowns;
  if (samples < unknowns)
    throw std::invalid_argument("fit: " + std::to_string(samples) + " samples < " +
                                std::to_string(unknowns) +
                                " unknown coefficients; need at least " +
                                std::to_string(unknowns));

  const Eigen::MatrixXd pts = sample_points(lattice, samples, options.strategy, options.seed);
  samples = static_cast<int>(pts.rows());
  const auto freqs = lattice.canonical_frequencies();

  // Columns: b_0, then (a_ω, b_ω) per canonical nonzero ω.
  Eigen::MatrixXd design(samples, unknowns);
  Eigen::VectorXd values(samples);
  for (int i = 0; i < samples; ++i) {
    const Eigen::VectorXd phi = pts.row(i).transpose();
    values(i) = model(phi);
    design(i, 0) = 1.0;
    int col = 1;
    for (std::size_t f = 1; f < freqs.size(); ++f) {
      const double arg = freqs[f].cast<double>().dot(phi);
      design(i, col++) = std::sin(arg);
      design(i, col++) = std::cos(arg);
    }
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < unknowns)
    throw std::runtime_error(
        "fit: design matrix is rank-deficient (rank " + std::to_string(qr.rank()) + " of " +
        std::to_string(unknowns) + "); try SampleStrategy::RegularGrid or more samples");
  const Eigen::VectorXd coeff = qr.solve(values);

  FitResult result;
  result.series.feature_count = lattice.feature_count();
  result.series.terms.push_back({freqs[0], 0.0, coeff(0)});
  int col = 1;
  for (std::size_t f = 1; f < freqs.size(); ++f) {
    FourierTerm t;
    t.omega = freqs[f];
    t.a = coeff(col++);
    t.b = coeff(col++);
    result.series.terms.push_back(t);
  }
  result.residual_rms = std::sqrt((design * coeff - values).squaredNorm() / samples);
  result.samples_used = samples;
  return result;
}

FourierSeries prune(const FourierSeries& series, double threshold) {
  if (threshold < 0.0) throw std::invalid_argument("prune: threshold must be >= 0");
  FourierSeries out;
  out.feature_count = series.feature_count;
  for (const auto& t : series.terms)
    if (std::max(std::abs(t.a), std::abs(t.b)) >= threshold) out.terms.push_back(t);
  return out;
}

FourierSeries recenter(const FourierSeries& series, const Eigen::VectorXd& center) {
  if (center.size() != series.feature_count)
    throw std::invalid_argument("recenter: center dimension mismatch");
  FourierSeries out;
  out.feature_count = series.feature_count;
  for (const auto& t : series.terms) {
    // a sin(t0 + s) + b cos(t0 + s) = (a cos t0 - b sin t0) sin s + (a sin t0 + b cos t0) cos s
    const double t0 = t.omega.cast<double>().dot(center);
    FourierTerm r;
    r.omega = t.omega;
    r.a = t.a * std::cos(t0) - t.b * std::sin(t0);
    r.b = t.a * std::sin(t0) + t.b * std::cos(t0);
    out.terms.push_back(r);
  }
  return out;
}

nlohmann::ordered_json series_to_json(const FourierSeries& series) {
  nlohmann::ordered_json j;
  j["n"] = series.feature_count;
  j["terms"] = nlohmann::ordered_json::array();
  for (const auto& t : series.terms) {
    nlohmann::ordered_json tj;
    tj["omega"] = std::vector<int>(t.omega.begin(), t.omega.end());
    tj["a"] = t.a;
    tj["b"] = t.b;
    j["terms"].push_back(tj);
  }
  return j;
}

FourierSeries series_from_json(const nlohmann::json& j) {
  FourierSeries s;
  s.feature_count = j.at("n").get<int>();
  for (const auto& tj : j.at("terms")) {
    FourierTerm t;
    const auto omega = tj.at("omega").get<std::vector<int>>();
    if (static_cast<int>(omega.size()) != s.feature_count)
      throw std::invalid_argument("series json: omega length mismatch");
    t.omega = Eigen::Map<const Eigen::VectorXi>(omega.data(), omega.size());
    t.a = tj.at("a").get<double>();
    t.b = tj.at("b").get<double>();
    s.terms.push_back(t);
  }
  return s;
}

}  // namespace qxai
