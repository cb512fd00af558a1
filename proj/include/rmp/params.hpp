#pragma once

#include <cstdint>
#include <limits>

namespace rmp {

/// Parameters of x_{i+1} = a_i x_i with a_i = 1 + rho exp(sigma W_i - sigma^2 t_i / 2),
/// t_i = i tau, i = 0..n-1.
struct ModelParams {
  double rho = 0.0;
  double sigma = 0.0;
  double tau = 1.0;
  std::int64_t n = 1;
  double x0 = 1.0;

  /// Throws DomainError unless 0 <= rho < 1, sigma >= 0, tau > 0, n >= 1, x0 > 0.
  void validate() const;

  /// Inverse temperature of the equivalent lattice gas, sigma^2 tau n^2 / 2.
  double beta() const {
    const double nn = static_cast<double>(n);
    return 0.5 * sigma * sigma * tau * nn * nn;
  }

  /// 1/beta; +inf for the deterministic process (sigma = 0).
  double temperature() const {
    const double b = beta();
    return b > 0.0 ? 1.0 / b : std::numeric_limits<double>::infinity();
  }

  double time(std::int64_t i) const { return static_cast<double>(i) * tau; }

  /// Parameters with sigma chosen so that the lattice temperature equals T.
  static ModelParams at_temperature(double rho, double T, std::int64_t n,
                                    double tau = 1.0, double x0 = 1.0);
};

}  // namespace rmp
