#include "rmp/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include <boost/random/uniform_01.hpp>

#include "CLI11.hpp"
#include "json.hpp"
#include "rmp/continuum.hpp"
#include "rmp/errors.hpp"
#include "rmp/lattice.hpp"
#include "rmp/parallel.hpp"
#include "rmp/process.hpp"
#include "rmp/rng.hpp"
#include "rmp/table.hpp"
#include "rmp/thermo.hpp"
#include "rmp/vdw.hpp"

#ifndef RMP_VERSION
#define RMP_VERSION "0.0.0"
#endif

namespace rmp::cli {

namespace {

using json = nlohmann::ordered_json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class UsageError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

struct Options {
  std::string format = "csv";
  std::string output;
  std::string config;
  unsigned jobs = 0;

  std::vector<double> rho;
  std::string T;
  std::vector<double> sigma;
  double tau = 1.0;
  std::vector<std::int64_t> n;
  std::string grid = "0.02:0.98:49";
  std::uint64_t seed = 0;
  std::int64_t paths = 10000;
  double x0 = 1.0;

  double r = 1.0;
  double t = 30.0;
  double dt = 1e-3;
  bool auxiliary = false;
  std::string density_grid = "0.05:5:100";
};

std::string branch_name(thermo::Branch b) {
  switch (b) {
    case thermo::Branch::gas: return "gas";
    case thermo::Branch::liquid: return "liquid";
    case thermo::Branch::supercritical: return "supercritical";
  }
  return "?";
}

json metadata(const std::string& command, unsigned jobs) {
  json m;
  m["schema_version"] = kSchemaVersion;
  m["artifact_version"] = RMP_VERSION;
  m["command"] = command;
  m["jobs"] = jobs;
  m["parameters"] = json::object();
  m["notes"] = json::array();
  return m;
}

std::vector<double> require_grid(const std::string& text, const char* flag) {
  try {
    return parse_grid(text);
  } catch (const ArgumentError& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

// --- subcommands -----------------------------------------------------------

SweepTable cmd_lyapunov(const Options& o, unsigned jobs, bool T_given, bool sigma_given) {
  if (o.rho.empty()) throw UsageError("--rho needs at least one value");
  if (T_given == sigma_given)
    throw UsageError("give exactly one of --T or --sigma (with --tau and a single --n)");

  SweepTable table;
  table.metadata = metadata("lyapunov", jobs);
  auto& params = table.metadata["parameters"];
  params["rho"] = o.rho;

  // Each row is (rho, T) plus, in sigma mode, the process parameters.
  struct Point {
    double rho, T, sigma;
  };
  std::vector<Point> points;
  std::vector<std::int64_t> sizes = o.n;
  if (T_given) {
    const auto Ts = require_grid(o.T, "--T");
    params["T"] = Ts;
    params["n"] = sizes;
    for (double rho : o.rho)
      for (double T : Ts) points.push_back({rho, T, kNaN});
    table.columns = {"rho", "T", "lambda_exact", "branch", "lambda_vdw"};
  } else {
    if (o.n.size() != 1) throw UsageError("--sigma needs exactly one --n (the number of steps)");
    if (!(o.tau > 0.0)) throw UsageError("--tau must be > 0");
    const auto n = static_cast<double>(o.n.front());
    params["sigma"] = o.sigma;
    params["tau"] = o.tau;
    params["n"] = sizes;
    for (double rho : o.rho)
      for (double s : o.sigma) {
        if (!(s > 0.0)) throw UsageError("--sigma values must be > 0");
        points.push_back({rho, 2.0 / (s * s * o.tau * n * n), s});
      }
    table.columns = {"rho", "sigma", "tau", "T", "lambda_exact", "branch", "lambda_vdw"};
  }
  for (auto n : sizes) {
    if (n < 2) throw UsageError("--n values must be >= 2");
    table.columns.push_back("lambda_" + std::to_string(n));
  }
  for (const auto& p : points) {
    if (!(p.rho > 0.0 && p.rho < 1.0)) throw UsageError("--rho values must lie in (0, 1)");
    if (!(p.T > 0.0) || !std::isfinite(p.T)) throw UsageError("temperatures must be > 0");
  }

  std::vector<std::vector<Cell>> rows(points.size());
  parallel_for(points.size(), jobs, [&](std::size_t i) {
    const auto& p = points[i];
    const auto state = thermo::stable_state(p.rho, p.T);
    std::vector<Cell> row{p.rho};
    if (!T_given) {
      row.emplace_back(p.sigma);
      row.emplace_back(o.tau);
    }
    row.emplace_back(p.T);
    row.emplace_back(state.point.p / p.T);
    row.emplace_back(branch_name(state.branch));
    row.emplace_back(vdw::lyapunov(p.rho, p.T));
    for (auto n : sizes) row.emplace_back(finite_lyapunov(p.rho, p.T, n, o.tau));
    rows[i] = std::move(row);
  });
  for (auto& r : rows) table.add_row(std::move(r));
  return table;
}

SweepTable cmd_isotherm(const Options& o, unsigned jobs) {
  if (o.T.empty()) throw UsageError("--T is required");
  const auto Ts = require_grid(o.T, "--T");
  const auto ds = require_grid(o.grid, "--grid");
  if (!(ds.front() > 0.0 && ds.back() < 1.0)) throw UsageError("--grid must lie inside (0, 1)");
  for (double T : Ts)
    if (!(T > 0.0)) throw UsageError("temperatures must be > 0");
  for (auto n : o.n)
    if (n < 2) throw UsageError("--n values must be >= 2");

  SweepTable table;
  table.metadata = metadata("isotherm", jobs);
  auto& params = table.metadata["parameters"];
  params["T"] = Ts;
  params["grid"] = ds;
  params["n"] = o.n;
  table.columns = {"T",  "d",  "pi",        "f",  "p",        "g",    "mu",    "rho",
                   "two_phase", "p0", "rho0", "p_vdw_raw", "p_vdw", "rho_vdw"};
  for (auto n : o.n) {
    table.columns.push_back("p_" + std::to_string(n));
    table.columns.push_back("rho_" + std::to_string(n));
  }
  table.metadata["notes"].push_back(
      "finite-lattice columns are empty where d >= (n-1)/n is out of reach");

  for (double T : Ts) {
    const auto pts = thermo::isotherm(T, ds, jobs);
    std::vector<std::vector<Cell>> rows(pts.size());
    parallel_for(pts.size(), jobs, [&](std::size_t i) {
      const auto& pt = pts[i];
      std::vector<Cell> row{T,     pt.d,  pt.pi, pt.f,         pt.p,    pt.g,
                            pt.mu, pt.rho, pt.two_phase, pt.p0, pt.rho0,
                            vdw::pressure_raw(pt.d, T), vdw::pressure(pt.d, T),
                            vdw::fugacity(pt.d, T)};
      for (auto n : o.n) {
        const double nn = static_cast<double>(n);
        if (pt.d < (nn - 1.0) / nn) {
          const double rho = finite_fugacity(n, pt.d, 1.0 / T);
          const auto s = finite_lattice_state(LatticeSpec{n, rho, 1.0 / T});
          row.emplace_back(s.pressure);
          row.emplace_back(rho);
        } else {
          row.emplace_back(kNaN);
          row.emplace_back(kNaN);
        }
      }
      rows[i] = std::move(row);
    });
    for (auto& r : rows) table.add_row(std::move(r));
  }
  return table;
}

SweepTable cmd_phase_diagram(const Options& o, unsigned jobs) {
  const auto Ts = require_grid(o.T.empty() ? "0.05:0.19:29" : o.T, "--T");
  for (double T : Ts)
    if (!(T > 0.0)) throw UsageError("temperatures must be > 0");
  const auto& cp = thermo::critical_point();

  SweepTable table;
  table.metadata = metadata("phase-diagram", jobs);
  table.metadata["parameters"]["T"] = Ts;
  table.columns = {"T",         "d_g",     "d_ell",     "p0",       "rho0",
                   "area_residual", "fugacity_mismatch", "rho0_vdw", "d_g_vdw", "d_ell_vdw"};

  std::vector<double> below;
  for (double T : Ts)
    if (T < cp.T_C) below.push_back(T);
  if (below.size() < Ts.size()) {
    std::ostringstream note;
    note << "omitted " << Ts.size() - below.size()
         << " temperature(s) at or above T_C = " << format_double(cp.T_C)
         << ": no coexistence there";
    table.metadata["notes"].push_back(note.str());
  }
  const auto recs = thermo::coexistence_curve(below, jobs);
  for (const auto& rec : recs) {
    double rho_v = kNaN, dg_v = kNaN, dl_v = kNaN;
    if (rec.T < vdw::kCriticalTemperature) {
      const auto c = vdw::coexistence(rec.T);
      rho_v = c.rho0;
      dg_v = c.d_g;
      dl_v = c.d_ell;
    }
    table.add_row({rec.T, rec.d_g, rec.d_ell, rec.p0, rec.rho0, rec.area_residual,
                   rec.fugacity_mismatch, rho_v, dg_v, dl_v});
  }
  return table;
}

SweepTable cmd_critical(unsigned jobs) {
  SweepTable table;
  table.metadata = metadata("critical", jobs);
  table.columns = {"model", "T_C", "d_C", "rho_C", "slope_residual", "curvature_residual",
                   "iterations"};
  const auto& cp = thermo::critical_point();
  table.add_row({std::string("exact"), cp.T_C, cp.d_C, cp.rho_C, cp.slope_residual,
                 cp.curvature_residual, std::int64_t{cp.iterations}});
  const auto v = vdw::critical_point();
  table.add_row({std::string("vdw"), v.T_C, v.d_C, v.rho_C, 0.0, 0.0, std::int64_t{0}});
  return table;
}

SweepTable cmd_simulate(const Options& o, unsigned jobs) {
  if (o.rho.empty() || o.sigma.empty() || o.n.empty())
    throw UsageError("simulate needs --rho, --sigma and --n");
  if (o.paths < 2) throw UsageError("--paths must be >= 2");

  SweepTable table;
  table.metadata = metadata("simulate", jobs);
  auto& params = table.metadata["parameters"];
  params["rho"] = o.rho;
  params["sigma"] = o.sigma;
  params["tau"] = o.tau;
  params["n"] = o.n;
  params["x0"] = o.x0;
  params["paths"] = o.paths;
  table.metadata["seed"] = o.seed;
  table.metadata["notes"].push_back("every row uses the same master seed");
  table.metadata["notes"].push_back("brute-force columns are filled for n <= 16");
  table.columns = {"rho",        "sigma",          "tau",        "n",
                   "T",          "log_exact_mean", "exact_mean", "log_brute_mean",
                   "brute_rel_diff", "mc_mean",    "mc_std_error", "log_mc_mean",
                   "mc_z_score", "kurtosis",       "heavy_tail", "overflow_paths",
                   "lambda_n"};

  for (double rho : o.rho)
    for (double s : o.sigma)
      for (auto n : o.n) {
        const ModelParams mp{rho, s, o.tau, n, o.x0};
        try {
          mp.validate();
        } catch (const DomainError& e) {
          throw UsageError(e.what());
        }
        const double log_exact = exact_mean(mp);
        double log_brute = kNaN;
        double brute_diff = kNaN;
        if (n <= 16) {
          log_brute = brute_mean(mp);
          brute_diff = std::abs(std::expm1(log_brute - log_exact));
        }
        const auto mc = mc_mean(mp, o.paths, o.seed, McOptions{jobs, 50.0});
        const double exact = std::exp(log_exact);
        // A degenerate sample (sigma = 0) has no spread; agreement is then up
        // to rounding of the two product orders.
        const double z = mc.std_error > 0.0 ? (mc.estimate - exact) / mc.std_error
                         : std::abs(mc.estimate - exact) <= 1e-12 * exact ? 0.0
                                                                          : kNaN;
        table.add_row({rho, s, o.tau, n, mp.temperature(), log_exact, exact, log_brute,
                       brute_diff, mc.estimate, mc.std_error, mc.log_estimate, z,
                       mc.kurtosis, mc.heavy_tail, mc.overflow_paths,
                       finite_lyapunov(mp)});
      }
  return table;
}

SweepTable cmd_continuum(const Options& o, unsigned jobs) {
  if (o.sigma.size() > 1) throw UsageError("continuum takes a single --sigma");
  continuum::ContinuumParams cp;
  cp.r = o.r;
  cp.sigma = o.sigma.empty() ? 1.5 : o.sigma.front();
  cp.t = o.t;
  cp.dt = o.dt;
  cp.x0 = o.x0;
  try {
    cp.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  if (!(cp.sigma > 0.0)) throw UsageError("--sigma must be > 0");
  if (o.paths < static_cast<std::int64_t>(continuum::kMinKsSamples))
    throw UsageError("--paths must be >= " + std::to_string(continuum::kMinKsSamples));
  const auto zs = require_grid(o.density_grid, "--density-grid");
  if (zs.size() < 2 || !(zs.front() > 0.0)) throw UsageError("--density-grid needs >= 2 positive points");

  SweepTable table;
  table.metadata = metadata("continuum", jobs);
  auto& params = table.metadata["parameters"];
  params["r"] = cp.r;
  params["sigma"] = cp.sigma;
  params["t"] = cp.t;
  params["dt"] = cp.dt;
  params["x0"] = cp.x0;
  params["paths"] = o.paths;
  params["auxiliary"] = o.auxiliary;
  params["density_grid"] = zs;
  table.metadata["seed"] = o.seed;
  if (cp.sigma * cp.sigma * cp.t < 40.0)
    table.metadata["notes"].push_back(
        "sigma^2 t < 40: A(t) is not expected to have reached its stationary law");
  table.columns = {"section", "name", "x", "value"};

  const auto A = continuum::simulate_integral_gbm(cp, o.paths, o.seed, jobs);
  const auto s = continuum::summarize(A);
  auto add = [&](const char* section, const std::string& name, double x, double v) {
    table.add_row({std::string(section), name, x, v});
  };
  add("summary", "count", kNaN, static_cast<double>(s.count));
  add("summary", "mean", kNaN, s.mean);
  add("summary", "std_error", kNaN, s.std_error);
  add("summary", "variance", kNaN, s.variance);
  add("summary", "median", kNaN, s.median);
  add("summary", "min", kNaN, s.min);
  add("summary", "max", kNaN, s.max);
  add("summary", "exact_mean", kNaN, cp.t);
  add("summary", "small_time_variance", kNaN, continuum::small_time_variance(cp.sigma, cp.t));
  add("summary", "stationary_median", kNaN, continuum::stationary_quantile_A(0.5, cp.sigma));

  const double sigma = cp.sigma;
  add("ks", "A_vs_inverse_gamma", kNaN, continuum::ks_distance(A, [sigma](double z) {
        return continuum::stationary_cdf_A(z, sigma);
      }));
  const auto y = continuum::growth_factors(cp, A);
  const double r = cp.r;
  add("ks", "y_vs_stationary", kNaN, continuum::ks_distance(y, [r, sigma](double v) {
        return continuum::stationary_cdf_y(v, r, sigma);
      }));
  if (o.auxiliary) {
    const auto X = continuum::simulate_auxiliary_diffusion(cp, o.paths, o.seed, jobs);
    add("ks", "A_vs_auxiliary", kNaN, continuum::ks_distance(A, X));
  }

  // Histogram on the density grid (bin edges) against the analytic density.
  std::vector<std::int64_t> counts(zs.size() - 1, 0);
  for (double a : A) {
    const auto it = std::upper_bound(zs.begin(), zs.end(), a);
    if (it == zs.begin() || it == zs.end()) continue;
    ++counts[static_cast<std::size_t>(it - zs.begin() - 1)];
  }
  for (std::size_t i = 0; i + 1 < zs.size(); ++i) {
    const double mid = 0.5 * (zs[i] + zs[i + 1]);
    const double width = zs[i + 1] - zs[i];
    add("density_A", "histogram", mid,
        static_cast<double>(counts[i]) / (static_cast<double>(A.size()) * width));
    add("density_A", "stationary", mid, continuum::stationary_density_A(mid, sigma));
  }
  return table;
}

// --- verify ----------------------------------------------------------------

struct Check {
  std::string name;
  double value;
  double tolerance;
  bool passed;
};

SweepTable cmd_verify(std::uint64_t seed, unsigned jobs) {
  std::vector<Check> checks;
  auto check_max = [&](std::string name, double tol, const std::function<double()>& f) {
    double v = kNaN;
    bool ok = false;
    try {
      v = f();
      ok = v <= tol;
    } catch (const std::exception&) {
      ok = false;
    }
    checks.push_back({std::move(name), v, tol, ok});
  };

  const std::array<double, 9> ds{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  const std::array<double, 5> Ts{0.1, 0.2, 0.3, 1.0, 10.0};

  check_max("pressure_identity_rel", 1e-8, [&] {
    double worst = 0.0;
    for (double T : Ts)
      for (double d : ds) {
        const auto pt = thermo::evaluate(d, T);
        const double alt = -pt.f + d * pt.mu;
        worst = std::max(worst, std::abs(alt - pt.p) / std::max(std::abs(pt.p), 1e-300));
      }
    return worst;
  });
  check_max("pi_lower_bound_violation", 0.0, [&] {
    double worst = 0.0;
    for (double T : Ts)
      for (double d : ds) {
        const double pi = thermo::solve_pi(d, T);
        worst = std::max({worst, thermo::pi_lower_bound(d, T) - pi, pi <= 0.0 ? 1.0 : 0.0});
      }
    return worst;
  });
  check_max("free_energy_upper_bound_violation", 0.0, [&] {
    double worst = 0.0;
    for (double T : Ts)
      for (double d : ds) worst = std::max(worst, thermo::free_energy(d, T) - vdw::free_energy(d, T));
    return worst;
  });
  check_max("chemical_potential_vs_difference_rel", 1e-6, [&] {
    double worst = 0.0;
    const double h = 1e-5;
    for (double T : {0.1, 0.3, 1.0})
      for (double d : {0.2, 0.5, 0.8}) {
        const double fd =
            (thermo::free_energy(d + h, T) - thermo::free_energy(d - h, T)) / (2.0 * h);
        const double mu = thermo::chemical_potential(d, T);
        worst = std::max(worst, std::abs(fd - mu) / std::max(std::abs(mu), 1e-3));
      }
    return worst;
  });
  check_max("free_energy_stationary_in_pi", 1e-8, [&] {
    double worst = 0.0;
    for (double T : Ts)
      for (double d : ds) {
        const double pi = thermo::solve_pi(d, T);
        worst = std::max(worst, std::abs(d - 1.0 + d * thermo::bose_occupation_integral(d, T, pi)));
      }
    return worst;
  });
  check_max("large_T_log_term_limit", 1e-2, [&] {
    double worst = 0.0;
    for (double d : {0.2, 0.5, 0.8}) {
      const double T = 1e3;
      const auto b = thermo::bose_integrals(d, T, thermo::solve_pi(d, T));
      worst = std::max(worst, std::abs(b.log_term - std::log(d)));
    }
    return worst;
  });
  check_max("critical_point_residual", thermo::kCriticalResidualTolerance, [&] {
    const auto& cp = thermo::critical_point();
    return std::max(std::abs(cp.slope_residual), std::abs(cp.curvature_residual));
  });
  check_max("maxwell_dual_construction_rel", 1e-6, [&] {
    double worst = 0.0;
    for (double T : {0.08, 0.1, 0.12, 0.15}) {
      const auto a = thermo::maxwell(T);
      const auto b = thermo::equal_potential_coexistence(T);
      worst = std::max({worst, std::abs(a.rho0 - b.rho0) / a.rho0, a.fugacity_mismatch});
    }
    return worst;
  });
  check_max("maxwell_area_residual", 1e-9, [&] {
    double worst = 0.0;
    for (double T : {0.08, 0.1, 0.12, 0.15})
      worst = std::max(worst, std::abs(thermo::maxwell(T).area_residual));
    return worst;
  });
  check_max("vdw_equal_pressure", 1e-12, [&] {
    double worst = 0.0;
    for (double T : {0.02, 0.05, 0.1, 0.15, 0.16}) {
      const auto c = vdw::coexistence(T);
      worst = std::max(worst, std::abs(vdw::pressure_at_logit(-c.logit, T) -
                                       vdw::pressure_at_logit(c.logit, T)));
    }
    return worst;
  });
  check_max("vdw_common_tangent", 1e-10, [&] {
    double worst = 0.0;
    for (double T : {0.05, 0.1, 0.15}) {
      const auto c = vdw::coexistence(T);
      const double chord =
          (vdw::free_energy(c.d_ell, T) - vdw::free_energy(c.d_g, T)) / (c.d_ell - c.d_g);
      worst = std::max({worst, std::abs(vdw::chemical_potential(c.d_g, T) - chord),
                        std::abs(vdw::chemical_potential(c.d_ell, T) - chord)});
    }
    return worst;
  });
  check_max("exact_vs_enumeration_rel", 1e-12, [&] {
    double worst = 0.0;
    for (std::int64_t n = 1; n <= 12; ++n)
      for (double rho : {0.01, 0.1, 0.5})
        for (double s2 : {0.0, 0.1, 1.0}) {
          const ModelParams mp{rho, std::sqrt(s2), 1.0, n, 1.0};
          worst = std::max(worst, std::abs(std::expm1(brute_mean(mp) - exact_mean(mp))));
        }
    return worst;
  });
  check_max("spectrum_mismatches", 0.0, [&] {
    double bad = 0.0;
    for (std::int64_t n = 2; n <= 10; ++n)
      for (std::int64_t N = 0; N <= n - 1; ++N) bad += verify_spectrum(n, N) ? 0.0 : 1.0;
    return bad;
  });
  check_max("deterministic_process_error", 1e-13, [&] {
    const ModelParams mp{0.3, 0.0, 1.0, 25, 2.0};
    const auto mc = mc_mean(mp, 100, seed, McOptions{jobs, 50.0});
    const double exact = 2.0 * std::pow(1.3, 25.0);
    return std::abs(mc.estimate - exact) / exact + mc.std_error;
  });
  check_max("ks_inverse_transform", 0.02, [&] {
    Engine engine(seed);
    std::vector<double> u(10000);
    for (auto& v : u) {
      double w = 0.0;
      while (!(w > 0.0)) w = boost::random::uniform_01<double>()(engine);
      v = continuum::stationary_quantile_A(w, 1.5);
    }
    return continuum::ks_distance(u, [](double z) { return continuum::stationary_cdf_A(z, 1.5); });
  });

  SweepTable table;
  table.metadata = metadata("verify", jobs);
  table.metadata["seed"] = seed;
  table.columns = {"property", "status", "value", "tolerance"};
  for (const auto& c : checks)
    table.add_row({c.name, std::string(c.passed ? "PASS" : "FAIL"), c.value, c.tolerance});
  return table;
}

// --- plumbing --------------------------------------------------------------

bool flag_present(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

std::string config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

std::string scalar_token(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number()) return format_double(v.get<double>());
  throw UsageError("config values must be strings, numbers, booleans or arrays");
}

// Config entries become flags placed before the command-line ones; keys that
// also appear on the command line are dropped so the flags win.
std::vector<std::string> config_tokens(const std::string& path, const std::string& command,
                                       const std::vector<std::string>& cli) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config file must hold a JSON object");

  // The temperature can be given directly or through (sigma, tau).
  const bool temperature_on_cli = command == "lyapunov" &&
                                  (flag_present(cli, "T") || flag_present(cli, "sigma") ||
                                   flag_present(cli, "tau"));
  static const std::set<std::string> temperature_keys{"T", "sigma", "tau"};

  std::vector<std::string> tokens;
  for (const auto& [key, value] : doc.items()) {
    if (key == "config" || key == "command") continue;
    if (flag_present(cli, key)) continue;
    if (temperature_on_cli && temperature_keys.count(key)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) tokens.push_back("--" + key);
      continue;
    }
    tokens.push_back("--" + key);
    if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) joined += (joined.empty() ? "" : ",") + scalar_token(item);
      tokens.push_back(joined);
    } else {
      tokens.push_back(scalar_token(value));
    }
  }
  return tokens;
}

void emit(const SweepTable& table, const Options& o, const std::string& command,
          std::ostream& out) {
  std::ostringstream buf;
  if (o.format == "json")
    write_json(buf, table);
  else
    write_csv(buf, table);

  std::filesystem::path target;
  if (!o.output.empty() && o.output != "-") {
    target = o.output;
  } else if (o.output.empty()) {
    if (const char* dir = std::getenv("RMP_OUTPUT_DIR"); dir && *dir)
      target = std::filesystem::path(dir) / (command + "." + o.format);
  }
  if (target.empty()) {
    out << buf.str();
    return;
  }
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  std::ofstream file(target, std::ios::binary);
  file << buf.str();
  if (!file) throw std::runtime_error("cannot write " + target.string());
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ArgumentError("not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw ArgumentError("not a number: '" + s + "'");
    return v;
  };
  if (text.empty()) throw ArgumentError("empty grid");

  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw ArgumentError("grid must be start:stop:count");
    const double start = number(parts[0]);
    const double stop = number(parts[1]);
    const double count_d = number(parts[2]);
    if (!(count_d >= 1.0) || count_d != std::floor(count_d))
      throw ArgumentError("grid count must be a positive integer");
    const auto count = static_cast<std::int64_t>(count_d);
    if (count == 1) return {start};
    for (std::int64_t i = 0; i < count; ++i)
      out.push_back(i + 1 == count ? stop
                                   : start + (stop - start) * static_cast<double>(i) /
                                                 static_cast<double>(count - 1));
  } else {
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) out.push_back(number(part));
  }
  if (out.empty()) throw ArgumentError("empty grid");
  for (std::size_t i = 1; i < out.size(); ++i)
    if (!(out[i] > out[i - 1])) throw ArgumentError("grid must be strictly increasing");
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  Options o;
  std::string command;

  CLI::App app{"Lyapunov exponents of a random multiplicative process and the "
               "equivalent lattice gas",
               "rmp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", RMP_VERSION);

  auto common = [&](CLI::App* s) {
    s->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    s->add_option("--output", o.output, "Output file ('-' for stdout)");
    s->add_option("--config", o.config, "JSON file with default flag values");
    s->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)");
  };
  auto list = [](CLI::App* s, const char* name, auto& target, const char* help) {
    return s->add_option(name, target, help)->delimiter(',');
  };

  auto* lyap = app.add_subcommand("lyapunov", "Lyapunov exponent vs temperature");
  common(lyap);
  list(lyap, "--rho", o.rho, "Fugacities")->required();
  auto* lyap_T = lyap->add_option("--T", o.T, "Temperature grid start:stop:count or list");
  auto* lyap_sigma = list(lyap, "--sigma", o.sigma, "Volatilities (instead of --T)");
  auto* lyap_tau = lyap->add_option("--tau", o.tau, "Time step (with --sigma)");
  list(lyap, "--n", o.n, "Finite lattice sizes (one value in --sigma mode)");
  lyap_T->excludes(lyap_sigma)->excludes(lyap_tau);

  auto* iso = app.add_subcommand("isotherm", "Equation of state along isotherms");
  common(iso);
  iso->add_option("--T", o.T, "Temperatures")->required();
  iso->add_option("--grid", o.grid, "Density grid")->capture_default_str();
  list(iso, "--n", o.n, "Finite lattice sizes for the overlay (default 200)");

  auto* phase = app.add_subcommand("phase-diagram", "Coexistence curve");
  common(phase);
  phase->add_option("--T", o.T, "Temperature grid (default 0.05:0.19:29)");

  auto* crit = app.add_subcommand("critical", "Critical point, exact and mean-field");
  common(crit);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo vs exact mean of x_n");
  common(sim);
  list(sim, "--rho", o.rho, "Amplitudes rho")->required();
  list(sim, "--sigma", o.sigma, "Volatilities")->required();
  sim->add_option("--tau", o.tau, "Time step")->capture_default_str();
  list(sim, "--n", o.n, "Numbers of steps")->required();
  sim->add_option("--x0", o.x0, "Initial value")->capture_default_str();
  sim->add_option("--paths", o.paths, "Monte Carlo paths")->capture_default_str();
  sim->add_option("--seed", o.seed, "Master seed")->required();

  auto* cont = app.add_subcommand("continuum", "Time integral of geometric Brownian motion");
  common(cont);
  list(cont, "--sigma", o.sigma, "Volatility (default 1.5)");
  cont->add_option("--r", o.r, "Growth rate")->capture_default_str();
  cont->add_option("--t", o.t, "Horizon")->capture_default_str();
  cont->add_option("--dt", o.dt, "Integrator step")->capture_default_str();
  cont->add_option("--x0", o.x0, "Initial value")->capture_default_str();
  cont->add_option("--paths", o.paths, "Paths")->capture_default_str();
  cont->add_option("--seed", o.seed, "Master seed")->required();
  cont->add_flag("--auxiliary", o.auxiliary, "Also simulate dX = sigma X dW + dt");
  cont->add_option("--density-grid", o.density_grid, "Histogram bin edges")
      ->capture_default_str();

  std::uint64_t verify_seed = 20240501;
  auto* ver = app.add_subcommand("verify", "Check the invariant suite");
  common(ver);
  ver->add_option("--seed", verify_seed, "Seed for the stochastic checks")->capture_default_str();

  try {
    std::vector<std::string> full = args;
    if (!args.empty()) {
      const std::string path = config_path(args);
      if (!path.empty()) {
        auto tokens = config_tokens(path, args.front(), args);
        full.insert(full.begin() + 1, tokens.begin(), tokens.end());
      }
    }
    std::vector<const char*> cargv{argc > 0 ? argv[0] : "rmp"};
    for (const auto& a : full) cargv.push_back(a.c_str());
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const unsigned jobs = o.jobs == 0 ? default_jobs() : o.jobs;
  try {
    SweepTable table;
    if (lyap->parsed()) {
      command = "lyapunov";
      table = cmd_lyapunov(o, jobs, lyap_T->count() > 0, lyap_sigma->count() > 0);
    } else if (iso->parsed()) {
      command = "isotherm";
      if (o.n.empty()) o.n = {200};
      table = cmd_isotherm(o, jobs);
    } else if (phase->parsed()) {
      command = "phase-diagram";
      table = cmd_phase_diagram(o, jobs);
    } else if (crit->parsed()) {
      command = "critical";
      table = cmd_critical(jobs);
    } else if (sim->parsed()) {
      command = "simulate";
      table = cmd_simulate(o, jobs);
    } else if (cont->parsed()) {
      command = "continuum";
      table = cmd_continuum(o, jobs);
    } else if (ver->parsed()) {
      command = "verify";
      table = cmd_verify(verify_seed, jobs);
    }
    if (!o.config.empty()) table.metadata["config"] = o.config;
    emit(table, o, command, out);
    if (command == "verify") {
      const auto status = table.column("status");
      for (const auto& row : table.rows)
        if (std::get<std::string>(row[status]) != "PASS") return kExitFailure;
    }
    return kExitOk;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    if (!e.diagnostic().empty()) err << "  last iterate: " << e.diagnostic() << "\n";
    return kExitNoConvergence;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NoTransitionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace rmp::cli
