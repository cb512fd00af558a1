#include "rmp/thermo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "rmp/errors.hpp"
#include "rmp/parallel.hpp"
#include "rmp/quadrature.hpp"

namespace rmp::thermo {

namespace {

constexpr double kTiny = 1e-300;

void check_state(double d, double T) {
  if (!(d > 0.0 && d < 1.0))
    throw DomainError("density must lie in (0, 1), got " + std::to_string(d));
  if (!(T > 0.0) || !std::isfinite(T))
    throw DomainError("temperature must be finite and > 0");
}

// Integrand ingredients at y for E = beta (d^2 y(2-y) + pi).
struct Occupation {
  double u;         // y (2 - y)
  double n;         // 1 / (e^E - 1)
  double n_dn;      // n (1 + n) = -dn/dE
  double log_term;  // log(1 - e^{-E})
};

inline Occupation occupation_at(double y, double d, double beta, double pi) {
  const double u = y * (2.0 - y);
  const double E = beta * (d * d * u + pi);
  const double n = 1.0 / std::expm1(E);
  const double log_term = E > 0.7 ? std::log1p(-std::exp(-E)) : std::log(-std::expm1(-E));
  return {u, n, n * (1.0 + n), log_term};
}

// The integrand varies on the scale pi / (2 d^2) near y = 0.
std::vector<double> occupation_breakpoints(double d, double pi) {
  return quad::geometric_breakpoints(0.0, 1.0, pi / (2.0 * d * d));
}

template <std::size_t N, class F>
quad::Values<N> occupation_quadrature(double d, double pi, F&& integrand) {
  const auto pts = occupation_breakpoints(d, pi);
  const auto r = quad::integrate<N>(integrand, pts, kQuadratureTolerance, kTiny);
  if (!r.converged)
    throw ConvergenceError("occupation quadrature did not reach tolerance");
  return r.value;
}

// I and dI/dpi.
std::pair<double, double> occupation_and_slope(double d, double T, double pi) {
  const double beta = 1.0 / T;
  const auto v = occupation_quadrature<2>(d, pi, [&](double y) {
    const auto o = occupation_at(y, d, beta, pi);
    return quad::Values<2>{o.n, o.n_dn};
  });
  return {v[0], -beta * v[1]};
}

// Every integral needed by the equation of state and its d-derivative.
struct Moments {
  double I;   // int n
  double J;   // int log(1 - e^-E)
  double K;   // int u n
  double I2;  // int n(1+n)
  double K2;  // int u n(1+n)
  double L2;  // int u^2 n(1+n)
};

Moments moments(double d, double T, double pi) {
  const double beta = 1.0 / T;
  const auto v = occupation_quadrature<6>(d, pi, [&](double y) {
    const auto o = occupation_at(y, d, beta, pi);
    return quad::Values<6>{o.n, o.log_term, o.u * o.n, o.n_dn, o.u * o.n_dn,
                           o.u * o.u * o.n_dn};
  });
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

struct Eos {
  double pi, f, p, g, mu;
};

Eos equation_of_state(double d, double T, double pi, const BoseIntegrals& b) {
  Eos e{};
  e.pi = pi;
  e.f = d * d * (2.0 * d - 3.0) / 3.0 + pi * (d - 1.0) + T * d * b.log_term;
  e.p = d * d * (4.0 * d - 3.0) / 3.0 + pi + 2.0 * d * d * d * b.weighted;
  e.g = e.f + pi;
  e.mu = 2.0 * d * d - 2.0 * d + pi + T * b.log_term + 2.0 * d * d * b.weighted;
  return e;
}

Eos equation_of_state(double d, double T) {
  const double pi = solve_pi(d, T);
  return equation_of_state(d, T, pi, bose_integrals(d, T, pi));
}

// Root of a function with a sign change on [lo, hi].
template <class F>
double bracketed_root(F&& f, double lo, double hi, double flo, double fhi,
                      const char* what, int bits = 50) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    std::ostringstream os;
    os << "[" << lo << ", " << hi << "] values " << flo << ", " << fhi;
    throw ConvergenceError(std::string(what) + ": root not bracketed", os.str());
  }
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(bits), iters);
  return 0.5 * (r.first + r.second);
}

// Smallest root of g(d) = 0 in (0, upper] for g increasing from -inf at 0+.
template <class G>
double root_from_left(G&& g, double upper, double g_upper, const char* what) {
  double lo = 0.5 * upper;
  double g_lo = g(lo);
  for (int i = 0; g_lo >= 0.0; ++i) {
    if (i > 200) throw ConvergenceError(std::string(what) + ": no lower bracket");
    lo *= 0.25;
    g_lo = g(lo);
  }
  return bracketed_root(g, lo, upper, g_lo, g_upper, what);
}

// Largest root of g(d) = 0 in [lower, 1) for g increasing to +inf at 1-.
template <class G>
double root_from_right(G&& g, double lower, double g_lower, const char* what) {
  double hi = lower + 0.5 * (1.0 - lower);
  double g_hi = g(hi);
  for (int i = 0; g_hi <= 0.0; ++i) {
    if (i > 200 || hi >= 1.0)
      throw ConvergenceError(std::string(what) + ": no upper bracket");
    hi = 1.0 - 0.25 * (1.0 - hi);
    g_hi = g(hi);
  }
  return bracketed_root(g, lower, hi, g_lower, g_hi, what);
}

}  // namespace

double bose_occupation_integral(double d, double T, double pi) {
  check_state(d, T);
  if (!(pi > 0.0)) throw DomainError("occupation integral needs pi > 0");
  return occupation_and_slope(d, T, pi).first;
}

double occupation_lower_bound(double d, double T, double pi) {
  return 1.0 / std::expm1((2.0 * d * d / 3.0 + pi) / T);
}

double pi_lower_bound(double d, double T) {
  return -T * std::log1p(-d) - 2.0 * d * d / 3.0;
}

double solve_pi(double d, double T) {
  check_state(d, T);
  const double target = 1.0 / d - 1.0;
  auto residual = [&](double pi) {
    const auto [I, dI] = occupation_and_slope(d, T, pi);
    return std::pair{I - target, dI};
  };

  // I is decreasing and convex in pi, so Newton from a point left of the root
  // stays left of it; the bracket only guards against quadrature noise.
  const double bound = pi_lower_bound(d, T);
  double lo = bound > 0.0 ? bound : std::max(T * d, 1e-12);
  double r_lo = residual(lo).first;
  for (int i = 0; r_lo < 0.0; ++i) {
    if (i > 400) throw ConvergenceError("solve_pi: no lower bracket");
    lo *= 0.25;
    r_lo = residual(lo).first;
  }
  double hi = std::max(2.0 * lo, lo + T);
  for (int i = 0; residual(hi).first > 0.0; ++i) {
    if (i > 400) throw ConvergenceError("solve_pi: no upper bracket");
    hi *= 2.0;
  }

  double pi = lo;
  for (int it = 0; it < 200; ++it) {
    const auto [r, slope] = residual(pi);
    if (r == 0.0) return pi;
    if (r > 0.0) lo = pi; else hi = pi;
    double next = pi - r / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - pi);
    pi = next;
    if (step <= std::min(kPiTolerance, 1e-14 * pi) || hi - lo <= 4e-16 * hi) return pi;
  }
  std::ostringstream os;
  os << "d=" << d << " T=" << T << " pi=" << pi << " bracket=[" << lo << ", " << hi << "]";
  throw ConvergenceError("solve_pi did not converge", os.str());
}

BoseIntegrals bose_integrals(double d, double T, double pi) {
  check_state(d, T);
  if (!(pi > 0.0)) throw DomainError("occupation integral needs pi > 0");
  const double beta = 1.0 / T;
  const auto v = occupation_quadrature<3>(d, pi, [&](double y) {
    const auto o = occupation_at(y, d, beta, pi);
    return quad::Values<3>{o.n, o.log_term, o.u * o.n};
  });
  return {v[0], v[1], v[2]};
}

double free_energy(double d, double T) { return equation_of_state(d, T).f; }
double pressure(double d, double T) { return equation_of_state(d, T).p; }
double gibbs(double d, double T) { return equation_of_state(d, T).g; }
double chemical_potential(double d, double T) { return equation_of_state(d, T).mu; }
double fugacity(double d, double T) { return std::exp(chemical_potential(d, T) / T); }

double pressure_slope(double d, double T) {
  const double pi = solve_pi(d, T);
  const double beta = 1.0 / T;
  const auto m = moments(d, T, pi);
  const double d2 = d * d;
  // pi'(d) from differentiating I(d, pi(d)) = 1/d - 1.
  const double dpi = (1.0 / d2 - 2.0 * d * beta * m.K2) / (beta * m.I2);
  return 4.0 * d2 - 2.0 * d + 6.0 * d2 * m.K - 4.0 * d2 * d2 * beta * m.L2 +
         (1.0 - 2.0 * d2 * d * beta * m.K2) * dpi;
}

ThermoPoint evaluate(double d, double T) {
  const auto e = equation_of_state(d, T);
  ThermoPoint pt;
  pt.d = d;
  pt.T = T;
  pt.pi = e.pi;
  pt.f = e.f;
  pt.p = e.p;
  pt.g = e.g;
  pt.mu = e.mu;
  pt.rho = std::exp(e.mu / T);
  return pt;
}

std::optional<Spinodals> spinodals(double T) {
  if (!(T > 0.0)) throw DomainError("temperature must be > 0");
  auto slope = [T](double d) { return pressure_slope(d, T); };

  constexpr int kGrid = 40;
  constexpr double kLo = 0.02;
  constexpr double kHi = 0.9;
  std::array<double, kGrid> ds{};
  std::array<double, kGrid> vs{};
  int imin = 0;
  for (int i = 0; i < kGrid; ++i) {
    ds[i] = kLo + (kHi - kLo) * i / (kGrid - 1);
    vs[i] = slope(ds[i]);
    if (vs[i] < vs[imin]) imin = i;
  }
  double dmin = ds[imin];
  double vmin = vs[imin];
  if (imin > 0 && imin < kGrid - 1) {
    std::uintmax_t iters = 100;
    const auto r = boost::math::tools::brent_find_minima(slope, ds[imin - 1],
                                                         ds[imin + 1], 40, iters);
    if (r.second < vmin) {
      dmin = r.first;
      vmin = r.second;
    }
  }
  if (vmin >= 0.0) return std::nullopt;

  // Grid neighbours strictly on either side of the refined minimum.
  int il = imin;
  while (il > 0 && (ds[il] >= dmin || vs[il] < 0.0)) --il;
  double a = ds[il];
  double va = vs[il];
  for (int i = 0; va <= 0.0; ++i) {
    if (i > 200) throw ConvergenceError("spinodals: no gas-side bracket");
    a *= 0.5;
    va = slope(a);
  }
  int ir = imin;
  while (ir < kGrid - 1 && (ds[ir] <= dmin || vs[ir] < 0.0)) ++ir;
  double b = ds[ir];
  double vb = vs[ir];
  for (int i = 0; vb <= 0.0; ++i) {
    if (i > 200) throw ConvergenceError("spinodals: no liquid-side bracket");
    b = 1.0 - 0.5 * (1.0 - b);
    vb = slope(b);
  }
  Spinodals s;
  s.gas = bracketed_root(slope, a, dmin, va, vmin, "gas spinodal");
  s.liquid = bracketed_root(slope, dmin, b, vmin, vb, "liquid spinodal");
  return s;
}

namespace {

Spinodals require_loop(double T) {
  const auto& cp = critical_point();
  if (T >= cp.T_C)
    throw NoTransitionError("no phase coexistence at T = " + std::to_string(T) +
                            " >= T_C = " + std::to_string(cp.T_C));
  const auto s = spinodals(T);
  if (!s)
    throw NoTransitionError("isotherm at T = " + std::to_string(T) +
                            " has no resolvable van der Waals loop");
  return *s;
}

}  // namespace

CoexistenceRecord maxwell(double T) {
  const Spinodals s = require_loop(T);
  auto p = [T](double d) { return pressure(d, T); };
  const double p_max = p(s.gas);
  const double p_min = p(s.liquid);

  struct Roots {
    double gas, liquid;
  };
  auto outer_roots = [&](double p0) {
    auto g = [&](double d) { return p(d) - p0; };
    return Roots{root_from_left(g, s.gas, p_max - p0, "maxwell gas density"),
                 root_from_right(g, s.liquid, p_min - p0, "maxwell liquid density")};
  };
  auto area = [&](double p0, const Roots& r) {
    const std::array<double, 4> pts{r.gas, s.gas, s.liquid, r.liquid};
    const auto q = quad::integrate_scalar(
        [&](double x) { return (p(x) - p0) / (x * x); }, pts, 1e-13, 1e-14);
    return q.value[0];
  };
  auto residual = [&](double p0) { return area(p0, outer_roots(p0)); };

  // The area decreases in p0; it is positive near the lower end of the loop
  // (or near p0 = 0, where d_g -> 0 and the integrand ~ T / x) and negative
  // near the local maximum.
  const double span = p_max - std::max(p_min, 0.0);
  const double lo = std::max(p_min, 0.0) + 1e-9 * span;
  const double hi = p_max - 1e-12 * span;
  const double p0 = bracketed_root(residual, lo, hi, residual(lo), residual(hi),
                                   "maxwell plateau pressure", 52);

  const Roots r = outer_roots(p0);
  CoexistenceRecord rec;
  rec.T = T;
  rec.d_g = r.gas;
  rec.d_ell = r.liquid;
  rec.p0 = p0;
  rec.area_residual = area(p0, r);
  rec.rho0 = fugacity(r.gas, T);
  rec.fugacity_mismatch = std::abs(fugacity(r.liquid, T) - rec.rho0) / rec.rho0;
  if (std::abs(rec.area_residual) > kMaxwellResidualTolerance ||
      rec.fugacity_mismatch > kFugacityMatchTolerance) {
    std::ostringstream os;
    os << "T=" << T << " d_g=" << rec.d_g << " d_ell=" << rec.d_ell
       << " p0=" << p0 << " area=" << rec.area_residual
       << " fugacity mismatch=" << rec.fugacity_mismatch;
    throw ConvergenceError("maxwell construction did not converge", os.str());
  }
  return rec;
}

CoexistenceRecord equal_potential_coexistence(double T) {
  const Spinodals s = require_loop(T);
  auto mu = [T](double d) { return chemical_potential(d, T); };
  const double mu_max = mu(s.gas);
  const double mu_min = mu(s.liquid);

  struct Pair {
    double gas, liquid;
  };
  auto densities = [&](double mu0) {
    auto g = [&](double d) { return mu(d) - mu0; };
    return Pair{root_from_left(g, s.gas, mu_max - mu0, "equal-mu gas density"),
                root_from_right(g, s.liquid, mu_min - mu0, "equal-mu liquid density")};
  };
  auto pressure_gap = [&](double mu0) {
    const auto r = densities(mu0);
    return pressure(r.gas, T) - pressure(r.liquid, T);
  };
  const double span = mu_max - mu_min;
  const double lo = mu_min + 1e-12 * span;
  const double hi = mu_max - 1e-12 * span;
  const double mu0 = bracketed_root(pressure_gap, lo, hi, pressure_gap(lo),
                                    pressure_gap(hi), "equal-mu coexistence", 52);
  const auto r = densities(mu0);
  CoexistenceRecord rec;
  rec.T = T;
  rec.d_g = r.gas;
  rec.d_ell = r.liquid;
  rec.p0 = pressure(r.gas, T);
  rec.rho0 = std::exp(mu0 / T);
  rec.area_residual = std::numeric_limits<double>::quiet_NaN();
  rec.fugacity_mismatch = std::abs(fugacity(r.liquid, T) - fugacity(r.gas, T)) / rec.rho0;
  return rec;
}

CriticalPoint solve_critical_point(double T_start, double d_start) {
  // Slope is analytic; curvature is a central difference of the slope.
  const double curvature_step = std::cbrt(std::numeric_limits<double>::epsilon());
  auto residual = [&](double T, double d) {
    const double h = curvature_step * std::max(d, 0.1);
    const double s = pressure_slope(d, T);
    const double c = (pressure_slope(d + h, T) - pressure_slope(d - h, T)) / (2.0 * h);
    return std::array<double, 2>{s, c};
  };
  auto norm = [](const std::array<double, 2>& r) { return std::hypot(r[0], r[1]); };

  constexpr double kStepT = 1e-4;
  constexpr double kStepD = 1e-4;
  constexpr int kMaxIterations = 100;

  double T = T_start;
  double d = d_start;
  auto r = residual(T, d);
  int it = 0;
  for (; it < kMaxIterations; ++it) {
    const auto rTp = residual(T + kStepT, d);
    const auto rTm = residual(T - kStepT, d);
    const auto rdp = residual(T, d + kStepD);
    const auto rdm = residual(T, d - kStepD);
    const double a = (rTp[0] - rTm[0]) / (2.0 * kStepT);
    const double b = (rdp[0] - rdm[0]) / (2.0 * kStepD);
    const double c = (rTp[1] - rTm[1]) / (2.0 * kStepT);
    const double e = (rdp[1] - rdm[1]) / (2.0 * kStepD);
    const double det = a * e - b * c;
    if (det == 0.0 || !std::isfinite(det)) break;
    const double dT = -(e * r[0] - b * r[1]) / det;
    const double dd = -(-c * r[0] + a * r[1]) / det;

    double alpha = 1.0;
    std::array<double, 2> r_new{};
    for (int k = 0; k < 30; ++k, alpha *= 0.5) {
      const double T_try = T + alpha * dT;
      const double d_try = d + alpha * dd;
      if (!(T_try > 0.0 && d_try > 0.01 && d_try < 0.99)) continue;
      r_new = residual(T_try, d_try);
      if (norm(r_new) < norm(r) || k == 29) break;
    }
    T += alpha * dT;
    d += alpha * dd;
    r = r_new;
    if (std::abs(alpha * dT) < 1e-12 && std::abs(alpha * dd) < 1e-12) break;
    if (std::abs(r[0]) < 1e-12 && std::abs(r[1]) < 1e-10) break;
  }
  if (!(std::abs(r[0]) < kCriticalResidualTolerance &&
        std::abs(r[1]) < kCriticalResidualTolerance)) {
    std::ostringstream os;
    os << "T=" << T << " d=" << d << " slope=" << r[0] << " curvature=" << r[1]
       << " iterations=" << it;
    throw ConvergenceError("critical point search did not converge", os.str());
  }
  CriticalPoint cp;
  cp.T_C = T;
  cp.d_C = d;
  cp.rho_C = fugacity(d, T);
  cp.slope_residual = r[0];
  cp.curvature_residual = r[1];
  cp.iterations = it + 1;
  return cp;
}

const CriticalPoint& critical_point() {
  static const CriticalPoint cp = solve_critical_point();
  return cp;
}

std::vector<CoexistenceRecord> coexistence_curve(std::span<const double> T_grid,
                                                 unsigned jobs) {
  const auto& cp = critical_point();
  for (double T : T_grid)
    if (!(T > 0.0 && T < cp.T_C))
      throw NoTransitionError("coexistence temperatures must lie in (0, T_C)");
  std::vector<CoexistenceRecord> out(T_grid.size());
  parallel_for(T_grid.size(), jobs, [&](std::size_t i) { out[i] = maxwell(T_grid[i]); });
  return out;
}

StableState stable_state(double rho, double T) {
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("fugacity must lie in (0, 1)");
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("temperature must be > 0");
  const double log_rho = std::log(rho);
  auto g = [&](double d) { return chemical_potential(d, T) / T - log_rho; };

  StableState out;
  const auto s = spinodals(T);
  if (!s) {
    // Monotone in d: bracket from the middle outwards.
    const double mid = 0.5;
    const double g_mid = g(mid);
    const double d = g_mid >= 0.0 ? root_from_left(g, mid, g_mid, "density")
                                  : root_from_right(g, mid, g_mid, "density");
    out.point = evaluate(d, T);
    out.branch = Branch::supercritical;
    return out;
  }
  const double g_gas = g(s->gas);
  const double g_liquid = g(s->liquid);
  std::optional<ThermoPoint> gas;
  std::optional<ThermoPoint> liquid;
  if (g_gas >= 0.0) gas = evaluate(root_from_left(g, s->gas, g_gas, "gas density"), T);
  if (g_liquid <= 0.0)
    liquid = evaluate(root_from_right(g, s->liquid, g_liquid, "liquid density"), T);

  // At equal (rho, T) the stable phase has the larger pressure; exact ties
  // (coexistence) go to the gas branch.
  const bool pick_gas =
      gas && (!liquid || gas->p >= liquid->p - 1e-12 * std::abs(liquid->p));
  out.point = pick_gas ? *gas : *liquid;
  out.branch = pick_gas ? Branch::gas : Branch::liquid;
  return out;
}

double lyapunov(double rho, double T) {
  const auto s = stable_state(rho, T);
  return s.point.p / T;
}

double transition_temperature(double rho) {
  if (!(rho > 0.0)) throw DomainError("fugacity must be > 0");
  const auto& cp = critical_point();
  if (rho >= cp.rho_C)
    throw NoTransitionError("no transition for rho = " + std::to_string(rho) +
                            " >= rho_C = " + std::to_string(cp.rho_C));
  const double log_rho = std::log(rho);

  // Positive when the gas phase is stable at (rho, T), negative for liquid;
  // continuous (pressure difference) where both branches exist.
  auto phase_gap = [&](double T) {
    const auto s = spinodals(T);
    if (!s) return 1.0;
    auto g = [&](double d) { return chemical_potential(d, T) / T - log_rho; };
    const double g_gas = g(s->gas);
    const double g_liquid = g(s->liquid);
    if (g_gas < 0.0) return -1.0;
    if (g_liquid > 0.0) return 1.0;
    const double dg = root_from_left(g, s->gas, g_gas, "gas density");
    const double dl = root_from_right(g, s->liquid, g_liquid, "liquid density");
    return pressure(dg, T) - pressure(dl, T);
  };

  const double hi = cp.T_C * (1.0 - 1e-9);
  double lo = std::min(0.5 * (-1.0 / (3.0 * log_rho)), 0.5 * cp.T_C);
  double g_lo = phase_gap(lo);
  for (int i = 0; g_lo > 0.0; ++i) {
    if (i > 20) throw ConvergenceError("transition temperature: no liquid-side bracket");
    lo *= 0.5;
    g_lo = phase_gap(lo);
  }
  return bracketed_root(phase_gap, lo, hi, g_lo, phase_gap(hi), "transition temperature", 48);
}

std::vector<ThermoPoint> isotherm(double T, std::span<const double> d_grid,
                                  unsigned jobs) {
  for (std::size_t i = 0; i < d_grid.size(); ++i) {
    if (!(d_grid[i] > 0.0 && d_grid[i] < 1.0))
      throw ArgumentError("isotherm densities must lie in (0, 1)");
    if (i > 0 && !(d_grid[i] > d_grid[i - 1]))
      throw ArgumentError("isotherm densities must be strictly increasing");
  }
  std::vector<ThermoPoint> out(d_grid.size());
  parallel_for(d_grid.size(), jobs, [&](std::size_t i) { out[i] = evaluate(d_grid[i], T); });
  if (T < critical_point().T_C) {
    const auto rec = maxwell(T);
    for (auto& pt : out) {
      if (pt.d > rec.d_g && pt.d < rec.d_ell) {
        pt.two_phase = true;
        pt.p0 = rec.p0;
        pt.rho0 = rec.rho0;
      }
    }
  }
  return out;
}

std::vector<EnvelopeSample> convex_envelope(std::span<const EnvelopeSample> samples) {
  if (samples.size() < 2) throw SizeError("convex envelope needs at least two samples");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].d > samples[i - 1].d))
      throw ArgumentError("convex envelope samples must be strictly increasing in d");

  // Monotone chain, lower hull; collinear points are kept as vertices.
  std::vector<std::size_t> hull;
  auto cross = [&](std::size_t a, std::size_t b, std::size_t c) {
    const auto& A = samples[a];
    const auto& B = samples[b];
    const auto& C = samples[c];
    return (B.d - A.d) * (C.f - A.f) - (B.f - A.f) * (C.d - A.d);
  };
  for (std::size_t i = 0; i < samples.size(); ++i) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), i) < 0.0)
      hull.pop_back();
    hull.push_back(i);
  }

  std::vector<EnvelopeSample> out(samples.begin(), samples.end());
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const auto& A = samples[hull[h]];
    const auto& B = samples[hull[h + 1]];
    const double slope = (B.f - A.f) / (B.d - A.d);
    for (std::size_t i = hull[h] + 1; i < hull[h + 1]; ++i)
      out[i].f = A.f + slope * (samples[i].d - A.d);
  }
  return out;
}

}  // namespace rmp::thermo
