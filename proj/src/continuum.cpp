#include "rmp/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rmp/errors.hpp"
#include "rmp/parallel.hpp"
#include "rmp/rng.hpp"

namespace rmp::continuum {

namespace {

// Separates the auxiliary-diffusion streams from the A(t) streams.
constexpr std::uint64_t kAuxiliaryDomain = 0x41757844696666ULL;

double trapezoid_path(const ContinuumParams& p, std::int64_t steps, std::uint64_t seed) {
  GaussianStream normal(seed);
  const double h = p.t / static_cast<double>(steps);
  const double sqrt_h = std::sqrt(h);
  const double drift = 0.5 * p.sigma * p.sigma;
  double w = 0.0;
  double prev = 1.0;
  double sum = 0.0;
  for (std::int64_t k = 1; k <= steps; ++k) {
    w += sqrt_h * normal();
    const double cur = std::exp(p.sigma * w - drift * (static_cast<double>(k) * h));
    sum += prev + cur;
    prev = cur;
  }
  return 0.5 * h * sum;
}

double auxiliary_path(const ContinuumParams& p, std::int64_t steps, std::uint64_t seed) {
  GaussianStream normal(seed);
  const double h = p.t / static_cast<double>(steps);
  const double sqrt_h = std::sqrt(h);
  const double drift = 0.5 * p.sigma * p.sigma * h;
  // Exact multiplicative flow over a step, trapezoid on the inhomogeneous term.
  double x = 0.0;
  for (std::int64_t k = 0; k < steps; ++k) {
    const double g = std::exp(p.sigma * sqrt_h * normal() - drift);
    x = g * x + 0.5 * h * (g + 1.0);
  }
  return x;
}

void check_paths(std::int64_t num_paths) {
  if (num_paths < 1) throw SizeError("need at least one path");
}

}  // namespace

void ContinuumParams::validate() const {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("r must be finite and > 0");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be >= 0");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t must be finite and > 0");
  if (!(dt > 0.0 && dt <= t)) throw DomainError("dt must lie in (0, t]");
  if (!(x0 > 0.0) || !std::isfinite(x0)) throw DomainError("x0 must be finite and > 0");
}

std::int64_t ContinuumParams::steps() const {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(t / dt - 1e-9)));
}

std::vector<double> simulate_integral_gbm(const ContinuumParams& params,
                                          std::int64_t num_paths, std::uint64_t seed,
                                          unsigned jobs) {
  params.validate();
  check_paths(num_paths);
  const auto steps = params.steps();
  std::vector<double> out(static_cast<std::size_t>(num_paths));
  parallel_for(out.size(), jobs, [&](std::size_t i) {
    out[i] = trapezoid_path(params, steps, stream_seed(seed, i));
  });
  return out;
}

std::vector<double> simulate_auxiliary_diffusion(const ContinuumParams& params,
                                                 std::int64_t num_paths,
                                                 std::uint64_t seed, unsigned jobs) {
  params.validate();
  check_paths(num_paths);
  const auto steps = params.steps();
  const std::uint64_t base = stream_seed(seed, kAuxiliaryDomain);
  std::vector<double> out(static_cast<std::size_t>(num_paths));
  parallel_for(out.size(), jobs, [&](std::size_t i) {
    out[i] = auxiliary_path(params, steps, stream_seed(base, i));
  });
  return out;
}

std::vector<double> growth_factors(const ContinuumParams& params,
                                   std::span<const double> integrals) {
  std::vector<double> out(integrals.size());
  std::transform(integrals.begin(), integrals.end(), out.begin(),
                 [&](double a) { return std::exp(params.r * a); });
  return out;
}

std::vector<RefinementLevel> integral_gbm_refinement(const ContinuumParams& params,
                                                     int levels, std::int64_t num_paths,
                                                     std::uint64_t seed, unsigned jobs) {
  params.validate();
  if (levels < 1 || levels > 20) throw ArgumentError("levels must lie in [1, 20]");
  if (num_paths < 2) throw SizeError("refinement needs at least two paths");
  const std::int64_t coarse = params.steps();
  const std::int64_t fine = coarse << (levels - 1);
  const double h = params.t / static_cast<double>(fine);
  const double sqrt_h = std::sqrt(h);
  const double drift = 0.5 * params.sigma * params.sigma;

  // per_path[p][l]: A(t) on level l (0 = coarsest).
  std::vector<std::vector<double>> per_path(static_cast<std::size_t>(num_paths));
  parallel_for(per_path.size(), jobs, [&](std::size_t p) {
    GaussianStream normal(stream_seed(seed, p));
    std::vector<double> sums(levels, 0.0);
    double w = 0.0;
    // Level l keeps every stride-th node with stride = 2^(levels-1-l).
    for (int l = 0; l < levels; ++l) sums[l] = 0.5;  // endpoint weight at s = 0
    for (std::int64_t k = 1; k <= fine; ++k) {
      w += sqrt_h * normal();
      const double cur = std::exp(params.sigma * w - drift * (static_cast<double>(k) * h));
      for (int l = 0; l < levels; ++l) {
        const std::int64_t stride = std::int64_t{1} << (levels - 1 - l);
        if (k % stride == 0) sums[l] += (k == fine ? 0.5 : 1.0) * cur;
      }
    }
    std::vector<double> a(levels);
    for (int l = 0; l < levels; ++l) {
      const double step = h * static_cast<double>(std::int64_t{1} << (levels - 1 - l));
      a[l] = step * sums[l];
    }
    per_path[p] = std::move(a);
  });

  std::vector<RefinementLevel> out(levels);
  const double n = static_cast<double>(num_paths);
  for (int l = 0; l < levels; ++l) {
    double mean = 0.0;
    for (const auto& a : per_path) mean += a[l];
    mean /= n;
    double ss = 0.0;
    double diff = 0.0;
    for (const auto& a : per_path) {
      ss += (a[l] - mean) * (a[l] - mean);
      if (l + 1 < levels) diff += std::abs(a[l] - a[l + 1]);
    }
    auto& lev = out[l];
    lev.dt = params.t / static_cast<double>(coarse << l);
    lev.mean = mean;
    lev.std_error = std::sqrt(ss / (n - 1.0) / n);
    lev.bias = mean - params.t;
    lev.successive_difference =
        l + 1 < levels ? diff / n : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

double stationary_density_A(double z, double sigma) {
  if (!(z > 0.0)) return 0.0;
  const double c = 2.0 / (sigma * sigma);
  return c / (z * z) * std::exp(-c / z);
}

double stationary_cdf_A(double z, double sigma) {
  if (!(z > 0.0)) return 0.0;
  return std::exp(-2.0 / (sigma * sigma * z));
}

double stationary_quantile_A(double u, double sigma) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
  return -2.0 / (sigma * sigma * std::log(u));
}

double stationary_density_y(double y, double r, double sigma) {
  if (!(y > 1.0)) return 0.0;
  const double c = 2.0 * r / (sigma * sigma);
  const double ly = std::log(y);
  return c / (y * ly * ly) * std::exp(-c / ly);
}

double stationary_cdf_y(double y, double r, double sigma) {
  if (!(y > 1.0)) return 0.0;
  return std::exp(-2.0 * r / (sigma * sigma * std::log(y)));
}

double small_time_mean(double t) { return t; }

double small_time_variance(double sigma, double t) { return sigma * sigma * t * t * t / 3.0; }

double ks_distance(std::span<const double> samples,
                   const std::function<double(double)>& cdf) {
  if (samples.size() < kMinKsSamples)
    throw SizeError("KS distance needs at least " + std::to_string(kMinKsSamples) +
                    " samples");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    sup = std::max({sup, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return sup;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() < kMinKsSamples || b.size() < kMinKsSamples)
    throw SizeError("KS distance needs at least " + std::to_string(kMinKsSamples) +
                    " samples per set");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double sup = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    sup = std::max(sup, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return sup;
}

SampleSummary summarize(std::span<const double> samples) {
  if (samples.size() < 2) throw SizeError("summary needs at least two samples");
  SampleSummary s;
  s.count = static_cast<std::int64_t>(samples.size());
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  s.mean = mean;
  s.variance = ss / (n - 1.0);
  s.std_error = std::sqrt(s.variance / n);
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size() / 2;
  s.median = sorted.size() % 2 ? sorted[m] : 0.5 * (sorted[m - 1] + sorted[m]);
  s.min = sorted.front();
  s.max = sorted.back();
  return s;
}

}  // namespace rmp::continuum
