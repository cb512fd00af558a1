#pragma once

#include <cstdint>
#include <vector>

#include "rmp/params.hpp"

namespace rmp {

/// One sampled trajectory. `times`, `brownian` and `multipliers` have n
/// entries (i = 0..n-1); `states` and `log_states` have n+1 (x_0..x_n).
struct PathRealization {
  std::vector<double> times;
  std::vector<double> brownian;
  std::vector<double> multipliers;
  std::vector<double> states;
  std::vector<double> log_states;
};

/// cov(a_i, a_j) = rho^2 (exp(sigma^2 min(t_i, t_j)) - 1). Throws RangeError
/// unless 0 <= i, j <= n-1.
double multiplier_covariance(const ModelParams& params, std::int64_t i,
                             std::int64_t j);

/// Samples one path. Brownian increments are N(0, tau), drawn from a stream
/// seeded with `seed`; equal seeds give identical paths.
PathRealization sample_path(const ModelParams& params, std::uint64_t seed);

/// log x_n of the path sample_path(params, seed) without materializing it.
double sample_log_terminal(const ModelParams& params, std::uint64_t seed);

struct McOptions {
  unsigned jobs = 1;
  /// Sample kurtosis m4/m2^2 above which `heavy_tail` is raised.
  double kurtosis_threshold = 50.0;
};

struct McEstimate {
  double estimate = 0.0;      ///< sample mean of x_n (inf if it overflows)
  double std_error = 0.0;     ///< standard error of the mean
  double log_estimate = 0.0;  ///< log of the sample mean, always finite
  double log_std_error = 0.0; ///< log of std_error (-inf when zero)
  double kurtosis = 0.0;      ///< m4/m2^2 of x_n; 0 for a degenerate sample
  std::int64_t num_paths = 0;
  std::int64_t overflow_paths = 0;  ///< paths whose x_n exceeds double range
  bool heavy_tail = false;
};

/// Monte Carlo estimate of <x_n>. Path p uses stream_seed(seed, p), so the
/// result is bit-identical for any `jobs`. Throws SizeError for num_paths < 2.
McEstimate mc_mean(const ModelParams& params, std::int64_t num_paths,
                   std::uint64_t seed, const McOptions& options = {});

/// Empirical first and second moments of the multipliers a_i over
/// independent paths, used to check E[a_i] = 1 + rho and the covariance.
struct MultiplierMoments {
  std::vector<double> mean;                ///< E[a_i]
  std::vector<std::vector<double>> cov;    ///< cov(a_i, a_j)
  std::vector<double> mean_std_error;
  std::vector<std::vector<double>> cov_std_error;
};

MultiplierMoments multiplier_moments(const ModelParams& params,
                                     const std::vector<std::int64_t>& indices,
                                     std::int64_t num_paths, std::uint64_t seed,
                                     unsigned jobs = 1);

}  // namespace rmp
