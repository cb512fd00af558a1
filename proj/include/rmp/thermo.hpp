#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace rmp::thermo {

// Throughout, pi is the shifted intensive variable: the occupation integral
// has exponent beta (d^2 y (2 - y) + pi).

inline constexpr double kQuadratureTolerance = 1e-10;
inline constexpr double kPiTolerance = 1e-12;
inline constexpr double kMaxwellResidualTolerance = 1e-10;
inline constexpr double kCriticalResidualTolerance = 1e-7;
inline constexpr double kFugacityMatchTolerance = 1e-6;

/// I(pi) = int_0^1 dy / (exp(beta (d^2 y(2-y) + pi)) - 1). Throws DomainError
/// unless 0 < d < 1, T > 0, pi > 0.
double bose_occupation_integral(double d, double T, double pi);

/// 1 / (exp(beta (2 d^2 / 3 + pi)) - 1), the convexity lower bound on I(pi).
double occupation_lower_bound(double d, double T, double pi);

/// -T log(1 - d) - 2 d^2 / 3, a lower bound on the solution of solve_pi.
double pi_lower_bound(double d, double T);

/// Unique pi > 0 with I(pi) = 1/d - 1.
double solve_pi(double d, double T);

/// The three integrals entering the equation of state at given pi:
/// I (occupation), J = int log(1 - e^{-E}), K = int y(2-y) / (e^E - 1).
struct BoseIntegrals {
  double occupation = 0.0;
  double log_term = 0.0;
  double weighted = 0.0;
};

BoseIntegrals bose_integrals(double d, double T, double pi);

/// Raw (pre-envelope) free energy density.
double free_energy(double d, double T);
double pressure(double d, double T);
double gibbs(double d, double T);
/// mu = d f / d d, evaluated at the solved pi (f is stationary in pi there).
double chemical_potential(double d, double T);
double fugacity(double d, double T);
/// d p / d d along the isotherm, through the implicit dependence of pi on d.
double pressure_slope(double d, double T);

struct ThermoPoint {
  double d = 0.0;
  double T = 0.0;
  double pi = 0.0;
  double f = 0.0;
  double p = 0.0;
  double g = 0.0;
  double mu = 0.0;
  double rho = 0.0;
  bool two_phase = false;
  double p0 = std::numeric_limits<double>::quiet_NaN();
  double rho0 = std::numeric_limits<double>::quiet_NaN();
};

/// All equation-of-state fields from one pi solve.
ThermoPoint evaluate(double d, double T);

/// Densities bounding the unstable region (d p / d d < 0) of an isotherm.
struct Spinodals {
  double gas = 0.0;     ///< local maximum of p
  double liquid = 0.0;  ///< local minimum of p
};

/// nullopt when the isotherm is monotone (no van der Waals loop found).
std::optional<Spinodals> spinodals(double T);

struct CoexistenceRecord {
  double T = 0.0;
  double d_g = 0.0;
  double d_ell = 0.0;
  double p0 = 0.0;
  double rho0 = 0.0;
  double area_residual = 0.0;      ///< equal-area integral at the solution
  double fugacity_mismatch = 0.0;  ///< |rho(d_ell) - rho(d_g)| / rho0
};

/// Equal-area construction: p0 such that int_{d_g}^{d_ell} (p - p0) / x^2 dx = 0
/// where d_g, d_ell are the outer roots of p(d, T) = p0. Throws
/// NoTransitionError for T >= T_C.
CoexistenceRecord maxwell(double T);

/// Independent route: solve mu(d_g) = mu(d_ell) and p(d_g) = p(d_ell).
CoexistenceRecord equal_potential_coexistence(double T);

struct CriticalPoint {
  double T_C = 0.0;
  double d_C = 0.0;
  double rho_C = 0.0;
  double slope_residual = 0.0;      ///< d p / d d at the solution
  double curvature_residual = 0.0;  ///< d^2 p / d d^2 at the solution
  int iterations = 0;
};

/// Damped Newton on (d p / d d, d^2 p / d d^2) = 0 in (T, d). Throws
/// ConvergenceError after 100 iterations.
CriticalPoint solve_critical_point(double T_start = 1.0 / 6.0, double d_start = 0.5);

/// solve_critical_point() from the default start, computed once per process.
const CriticalPoint& critical_point();

/// maxwell(T) for each T, in grid order. Throws NoTransitionError if any
/// T >= T_C.
std::vector<CoexistenceRecord> coexistence_curve(std::span<const double> T_grid,
                                                 unsigned jobs = 1);

/// Temperature at which rho0(T) = rho. Throws NoTransitionError for
/// rho >= rho_C.
double transition_temperature(double rho);

enum class Branch { gas, liquid, supercritical };

struct StableState {
  ThermoPoint point;
  Branch branch = Branch::supercritical;
};

/// Density solving fugacity(d, T) = rho on the thermodynamically stable
/// branch (largest pressure among the roots).
StableState stable_state(double rho, double T);

/// lambda(rho, T) = p / T on the stable branch.
double lyapunov(double rho, double T);

/// Equation of state along an isotherm. For T < T_C the points strictly
/// inside (d_g, d_ell) are flagged two_phase and carry p0, rho0.
std::vector<ThermoPoint> isotherm(double T, std::span<const double> d_grid,
                                  unsigned jobs = 1);

struct EnvelopeSample {
  double d = 0.0;
  double f = 0.0;
};

/// Lower convex envelope evaluated at the input abscissae. Points that are
/// hull vertices are returned unchanged. Throws ArgumentError for d not
/// strictly increasing and SizeError for fewer than two samples.
std::vector<EnvelopeSample> convex_envelope(std::span<const EnvelopeSample> samples);

}  // namespace rmp::thermo
