#include "rmp/process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rmp/errors.hpp"
#include "rmp/parallel.hpp"
#include "rmp/rng.hpp"

namespace rmp {

namespace {

// x_n above this does not fit in a double.
constexpr double kMaxLogDouble = 709.0;

void check_index(const ModelParams& params, std::int64_t i) {
  if (i < 0 || i >= params.n)
    throw RangeError("step index " + std::to_string(i) + " outside [0, " +
                     std::to_string(params.n - 1) + "]");
}

// Multiplier exponent sigma W_i - sigma^2 t_i / 2.
inline double drift_corrected(double sigma, double w, double t) {
  return sigma * w - 0.5 * sigma * sigma * t;
}

}  // namespace

double multiplier_covariance(const ModelParams& params, std::int64_t i,
                             std::int64_t j) {
  params.validate();
  check_index(params, i);
  check_index(params, j);
  const double t = params.time(std::min(i, j));
  return params.rho * params.rho * std::expm1(params.sigma * params.sigma * t);
}

PathRealization sample_path(const ModelParams& params, std::uint64_t seed) {
  params.validate();
  const auto n = static_cast<std::size_t>(params.n);
  PathRealization path;
  path.times.resize(n);
  path.brownian.resize(n);
  path.multipliers.resize(n);
  path.states.resize(n + 1);
  path.log_states.resize(n + 1);

  GaussianStream gauss(seed);
  const double step_sd = std::sqrt(params.tau);
  double w = 0.0;
  double x = params.x0;
  double log_x = std::log(params.x0);
  path.states[0] = x;
  path.log_states[0] = log_x;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = params.time(static_cast<std::int64_t>(i));
    const double excess = params.rho * std::exp(drift_corrected(params.sigma, w, t));
    const double a = 1.0 + excess;
    path.times[i] = t;
    path.brownian[i] = w;
    path.multipliers[i] = a;
    x *= a;
    log_x += std::log1p(excess);
    path.states[i + 1] = x;
    path.log_states[i + 1] = log_x;
    if (i + 1 < n) w += step_sd * gauss();
  }
  return path;
}

double sample_log_terminal(const ModelParams& params, std::uint64_t seed) {
  const auto n = params.n;
  GaussianStream gauss(seed);
  const double step_sd = std::sqrt(params.tau);
  double w = 0.0;
  double log_x = std::log(params.x0);
  for (std::int64_t i = 0; i < n; ++i) {
    const double t = params.time(i);
    log_x += std::log1p(params.rho * std::exp(drift_corrected(params.sigma, w, t)));
    if (i + 1 < n) w += step_sd * gauss();
  }
  return log_x;
}

McEstimate mc_mean(const ModelParams& params, std::int64_t num_paths,
                   std::uint64_t seed, const McOptions& options) {
  params.validate();
  if (num_paths < 2) throw SizeError("mc_mean needs at least 2 paths");

  const auto count = static_cast<std::size_t>(num_paths);
  std::vector<double> log_terminal(count);
  parallel_for(count, options.jobs, [&](std::size_t p) {
    log_terminal[p] = sample_log_terminal(params, stream_seed(seed, p));
  });

  McEstimate out;
  out.num_paths = num_paths;
  out.overflow_paths = std::count_if(log_terminal.begin(), log_terminal.end(),
                                     [](double v) { return v > kMaxLogDouble; });

  // Moments are taken of x_n / scale with scale = exp(max log x_n) whenever a
  // path overflows; otherwise relative to the first sample, which keeps a
  // degenerate sample (sigma = 0) exactly degenerate.
  const double max_log = *std::max_element(log_terminal.begin(), log_terminal.end());
  const bool rescale = out.overflow_paths > 0;
  const double log_scale = rescale ? max_log : 0.0;

  std::vector<double> values(count);
  for (std::size_t p = 0; p < count; ++p)
    values[p] = std::exp(log_terminal[p] - log_scale);

  const double ref = values[0];
  const double N = static_cast<double>(count);
  double shift_sum = 0.0;
  for (double v : values) shift_sum += v - ref;
  const double mean = ref + shift_sum / N;

  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : values) {
    const double dv = v - mean;
    const double sq = dv * dv;
    m2 += sq;
    m4 += sq * sq;
  }
  const double variance = m2 / (N - 1.0);
  const double std_error = std::sqrt(variance / N);
  out.kurtosis = m2 > 0.0 ? (m4 / N) / ((m2 / N) * (m2 / N)) : 0.0;
  out.heavy_tail = out.kurtosis > options.kurtosis_threshold;

  out.log_estimate = std::log(mean) + log_scale;
  out.log_std_error = std_error > 0.0 ? std::log(std_error) + log_scale
                                      : -std::numeric_limits<double>::infinity();
  if (rescale) {
    out.estimate = std::exp(out.log_estimate);
    out.std_error = std::exp(out.log_std_error);
  } else {
    out.estimate = mean;
    out.std_error = std_error;
  }
  return out;
}

MultiplierMoments multiplier_moments(const ModelParams& params,
                                     const std::vector<std::int64_t>& indices,
                                     std::int64_t num_paths, std::uint64_t seed,
                                     unsigned jobs) {
  params.validate();
  if (num_paths < 2) throw SizeError("multiplier_moments needs at least 2 paths");
  for (auto i : indices) check_index(params, i);

  const std::size_t k = indices.size();
  const auto count = static_cast<std::size_t>(num_paths);
  std::vector<double> samples(count * k);
  parallel_for(count, jobs, [&](std::size_t p) {
    const auto path = sample_path(params, stream_seed(seed, p));
    for (std::size_t a = 0; a < k; ++a)
      samples[p * k + a] = path.multipliers[static_cast<std::size_t>(indices[a])];
  });

  const double N = static_cast<double>(count);
  MultiplierMoments m;
  m.mean.assign(k, 0.0);
  m.mean_std_error.assign(k, 0.0);
  m.cov.assign(k, std::vector<double>(k, 0.0));
  m.cov_std_error.assign(k, std::vector<double>(k, 0.0));

  for (std::size_t p = 0; p < count; ++p)
    for (std::size_t a = 0; a < k; ++a) m.mean[a] += samples[p * k + a];
  for (auto& v : m.mean) v /= N;

  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      double s = 0.0;
      double s2 = 0.0;
      for (std::size_t p = 0; p < count; ++p) {
        const double prod =
            (samples[p * k + a] - m.mean[a]) * (samples[p * k + b] - m.mean[b]);
        s += prod;
        s2 += prod * prod;
      }
      const double c = s / N;
      m.cov[a][b] = s / (N - 1.0);
      m.cov_std_error[a][b] = std::sqrt(std::max(0.0, s2 / N - c * c) / N);
    }
    m.mean_std_error[a] = std::sqrt(m.cov[a][a] / N);
  }
  return m;
}

}  // namespace rmp
