#include "rmp/params.hpp"

#include <cmath>
#include <string>

#include "rmp/errors.hpp"

namespace rmp {

void ModelParams::validate() const {
  if (!(rho >= 0.0 && rho < 1.0))
    throw DomainError("rho must satisfy 0 <= rho < 1, got " + std::to_string(rho));
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw DomainError("sigma must be finite and >= 0");
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw DomainError("tau must be finite and > 0");
  if (n < 1) throw DomainError("n must be >= 1");
  if (!(x0 > 0.0) || !std::isfinite(x0))
    throw DomainError("x0 must be finite and > 0");
}

ModelParams ModelParams::at_temperature(double rho, double T, std::int64_t n,
                                        double tau, double x0) {
  if (!(T > 0.0)) throw DomainError("temperature must be > 0");
  if (n < 1) throw DomainError("n must be >= 1");
  const double nn = static_cast<double>(n);
  ModelParams p;
  p.rho = rho;
  p.tau = tau;
  p.n = n;
  p.x0 = x0;
  p.sigma = std::isinf(T) ? 0.0 : std::sqrt(2.0 / (T * tau * nn * nn));
  p.validate();
  return p;
}

}  // namespace rmp
