#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

// Continuous-time limit: x(t) = x0 exp(r A(t)) with A(t) the time integral of
// the unit-mean geometric Brownian motion exp(sigma W(s) - sigma^2 s / 2).
namespace rmp::continuum {

struct ContinuumParams {
  double r = 1.0;
  double sigma = 1.0;
  double t = 1.0;
  double dt = 1e-3;
  double x0 = 1.0;

  /// Throws DomainError unless r > 0, sigma >= 0, t > 0, 0 < dt <= t, x0 > 0.
  /// sigma = 0 is accepted as the deterministic limit.
  void validate() const;
  /// Number of integrator steps: t / dt rounded up; the actual step is t / steps.
  std::int64_t steps() const;
};

/// Samples of A(t), trapezoid rule on exact Brownian increments. Path p uses
/// stream_seed(seed, p), so samples are identical for any `jobs`.
std::vector<double> simulate_integral_gbm(const ContinuumParams& params,
                                          std::int64_t num_paths, std::uint64_t seed,
                                          unsigned jobs = 1);

/// Samples of X(t) for dX = sigma X dW + dt, X(0) = 0, which has the law of
/// A(t). Uses an independent family of streams derived from `seed`.
std::vector<double> simulate_auxiliary_diffusion(const ContinuumParams& params,
                                                 std::int64_t num_paths,
                                                 std::uint64_t seed, unsigned jobs = 1);

/// y = x(t) / x0 = exp(r A) for each A.
std::vector<double> growth_factors(const ContinuumParams& params,
                                   std::span<const double> integrals);

struct RefinementLevel {
  double dt = 0.0;
  double mean = 0.0;       ///< sample mean of A(t)
  double std_error = 0.0;
  double bias = 0.0;       ///< mean - t
  /// Mean |A_dt - A_{dt/2}| over paths; NaN on the finest level.
  double successive_difference = 0.0;
};

/// A(t) at step sizes dt, dt/2, ..., dt/2^(levels-1) along the same Brownian
/// paths (each path is drawn once on the finest grid and subsampled).
std::vector<RefinementLevel> integral_gbm_refinement(const ContinuumParams& params,
                                                     int levels, std::int64_t num_paths,
                                                     std::uint64_t seed,
                                                     unsigned jobs = 1);

/// Inverse-Gamma stationary law of A: density 2/(sigma^2 z^2) e^{-2/(sigma^2 z)}.
double stationary_density_A(double z, double sigma);
double stationary_cdf_A(double z, double sigma);
double stationary_quantile_A(double u, double sigma);

/// Stationary law of y = x / x0 for y > 1.
double stationary_density_y(double y, double r, double sigma);
double stationary_cdf_y(double y, double r, double sigma);

/// Leading small-time moments of A(t): mean t, variance sigma^2 t^3 / 3.
double small_time_mean(double t);
double small_time_variance(double sigma, double t);

/// sup |F_n - F| for the empirical CDF of `samples`. Throws SizeError for
/// fewer than kMinKsSamples samples.
inline constexpr std::size_t kMinKsSamples = 100;
double ks_distance(std::span<const double> samples,
                   const std::function<double(double)>& cdf);
/// Two-sample sup distance between empirical CDFs.
double ks_distance(std::span<const double> a, std::span<const double> b);

struct SampleSummary {
  std::int64_t count = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double variance = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
};

SampleSummary summarize(std::span<const double> samples);

}  // namespace rmp::continuum
