#include "rmp/vdw.hpp"

#include <cmath>
#include <string>

#include "rmp/errors.hpp"

namespace rmp::vdw {

namespace {

void check_density(double d) {
  if (!(d > 0.0 && d < 1.0))
    throw DomainError("density must lie in (0, 1), got " + std::to_string(d));
}

void check_temperature(double T) {
  if (!(T > 0.0) || std::isnan(T)) throw DomainError("temperature must be > 0");
}

// log(1 + e^x) without overflow or cancellation.
double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

// Bisection to the last representable midpoint; f(lo) < 0 < f(hi).
template <class F>
double bisect(F&& f, double lo, double hi) {
  for (int i = 0; i < 2000; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

namespace {

// x = log(d_ell / d_g) solves x = tanh(x / 2) / (3T), the Delta equation with
// Delta = tanh(x / 2). Working in x keeps d_g = 1 / (1 + e^x) accurate when it
// is far below the resolution of Delta itself (T well under 0.05).
double coexistence_logit(double T) {
  const double a = 1.0 / (3.0 * T);
  auto g = [a](double x) { return x - a * std::tanh(0.5 * x); };
  return bisect(g, 1e-12, a);
}

}  // namespace

double delta(double T) {
  check_temperature(T);
  if (T >= kCriticalTemperature) return 0.0;
  return std::tanh(0.5 * coexistence_logit(T));
}

Coexistence coexistence(double T) {
  check_temperature(T);
  if (T >= kCriticalTemperature)
    throw NoTransitionError("no mean-field coexistence at T = " + std::to_string(T) +
                            " >= 1/6");
  const double x = coexistence_logit(T);
  Coexistence c;
  c.T = T;
  c.delta = std::tanh(0.5 * x);
  c.d_g = 1.0 / (1.0 + std::exp(x));
  c.d_ell = 1.0 / (1.0 + std::exp(-x));
  c.p0 = pressure_raw(c.d_g, T);
  c.rho0 = std::exp(-1.0 / (3.0 * T));
  c.logit = x;
  return c;
}

double pressure_raw(double d, double T) {
  check_density(d);
  check_temperature(T);
  return -T * std::log1p(-d) - d * d / 3.0;
}

double pressure_at_logit(double x, double T) {
  check_temperature(T);
  const double d = sigmoid(x);
  return T * softplus(x) - d * d / 3.0;
}

double pressure(double d, double T) {
  check_density(d);
  check_temperature(T);
  if (T < kCriticalTemperature) {
    const auto c = coexistence(T);
    if (d > c.d_g && d < c.d_ell) return c.p0;
  }
  return pressure_raw(d, T);
}

double free_energy(double d, double T) {
  check_density(d);
  check_temperature(T);
  return T * (d * std::log(d) + (1.0 - d) * std::log1p(-d)) - d * d / 3.0;
}

double chemical_potential(double d, double T) {
  check_density(d);
  check_temperature(T);
  return T * (std::log(d) - std::log1p(-d)) - 2.0 * d / 3.0;
}

double fugacity(double d, double T) {
  return std::exp(chemical_potential(d, T) / T);
}

DensityRoot density(double rho, double T) {
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("fugacity must lie in (0, 1)");
  check_temperature(T);
  const double log_rho = std::log(rho);
  const double a = 2.0 / (3.0 * T);
  // log fugacity as a function of the logit x = log(d / (1 - d)).
  auto g = [&](double x) { return x - a * sigmoid(x) - log_rho; };
  // g(x) <= x - log_rho and g(x) >= x - a - log_rho bound the root.
  double lo = log_rho - 1.0;
  double hi = log_rho + a + 1.0;

  DensityRoot out;
  if (T < kCriticalTemperature) {
    // Extrema of the fugacity curve split it into three monotone segments.
    const double s = std::sqrt(1.0 - 6.0 * T);
    const double d1 = 0.5 * (1.0 - s);
    const double d2 = 0.5 * (1.0 + s);
    const double x1 = std::log(d1 / d2);
    const double line = -1.0 / (3.0 * T);
    if (log_rho == line) {
      const auto c = coexistence(T);
      out.d = c.d_g;
      out.logit = -c.logit;
      out.coexistence = true;
      return out;
    }
    if (log_rho < line)
      hi = x1;
    else
      lo = -x1;
  }
  out.logit = bisect(g, lo, hi);
  out.d = sigmoid(out.logit);
  return out;
}

double lyapunov(double rho, double T) {
  const auto r = density(rho, T);
  if (r.coexistence) return coexistence(T).p0 / T;
  // -log(1 - d) = softplus(logit) keeps full precision as d -> 1.
  return softplus(r.logit) - r.d * r.d / (3.0 * T);
}

double transition_temperature(double rho) {
  if (!(rho > 0.0)) throw DomainError("fugacity must be > 0");
  if (rho >= kCriticalFugacity)
    throw NoTransitionError("no mean-field transition for rho = " + std::to_string(rho) +
                            " >= e^-2");
  return -1.0 / (3.0 * std::log(rho));
}

}  // namespace rmp::vdw
