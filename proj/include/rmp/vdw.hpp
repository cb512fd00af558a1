#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

// Mean-field (van der Waals) lattice gas obtained from the uniform-coupling
// lower bound on the partition function.
namespace rmp::vdw {

inline constexpr double kCriticalTemperature = 1.0 / 6.0;
inline constexpr double kCriticalDensity = 0.5;
inline const double kCriticalFugacity = std::exp(-2.0);

/// Pair couplings of the uniform-interaction gases that bound the partition
/// function on an n-site lattice. Only the lower bound drives this module.
inline double lower_bound_coupling(std::int64_t n) { return -2.0 / (3.0 * n); }
inline double upper_bound_coupling(std::int64_t n, std::int64_t N) {
  return -2.0 / (3.0 * n * n) * (3.0 * n - 2.0 * N - 2.0);
}
inline double weak_upper_bound_coupling(std::int64_t n) { return -2.0 / n; }

/// Positive root of delta = tanh(delta / (6T)); 0 for T >= 1/6.
double delta(double T);

struct Coexistence {
  double T = 0.0;
  double delta = 0.0;
  double d_g = 0.0;
  double d_ell = 0.0;
  double p0 = 0.0;
  double rho0 = 0.0;  ///< exp(-1 / (3T))
  double logit = 0.0; ///< log(d_ell / d_g)
};

/// Throws NoTransitionError for T >= 1/6.
Coexistence coexistence(double T);

/// -T log(1 - d) - d^2 / 3 without the Maxwell plateau.
double pressure_raw(double d, double T);
/// pressure_raw at d = 1 / (1 + e^-x). Stays accurate for d within a few
/// ulps of 1, where 1 - d is no longer representable to full precision.
double pressure_at_logit(double x, double T);
/// With the plateau p0 substituted on (d_g, d_ell) for T < 1/6.
double pressure(double d, double T);

/// T (d log d + (1 - d) log(1 - d)) - d^2 / 3 (pre-envelope).
double free_energy(double d, double T);
double chemical_potential(double d, double T);
/// d / (1 - d) exp(-2d / (3T)).
double fugacity(double d, double T);

struct DensityRoot {
  double d = 0.0;
  bool coexistence = false;  ///< rho sits exactly on exp(-1 / (3T))
  /// log(d / (1 - d)); carries the precision lost in d near 0 or 1.
  double logit = 0.0;
};

/// Stable root of fugacity(d, T) = rho: smallest root for rho below
/// exp(-1 / (3T)), largest above, the gas root (flagged) on the line itself.
DensityRoot density(double rho, double T);

/// -log(1 - d) - d^2 / (3T) at the stable density.
double lyapunov(double rho, double T);

/// -1 / (3 log rho). Throws NoTransitionError for rho >= e^{-2} and
/// DomainError for rho <= 0.
double transition_temperature(double rho);

struct CriticalPoint {
  double T_C = kCriticalTemperature;
  double d_C = kCriticalDensity;
  double rho_C = kCriticalFugacity;
};

inline CriticalPoint critical_point() { return {}; }

}  // namespace rmp::vdw
