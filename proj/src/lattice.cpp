#include "rmp/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>

#include "rmp/errors.hpp"
#include "rmp/logsum.hpp"

namespace rmp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log of sum over subsets S of {first..last} of
//   exp(|S| log_rho + coupling * sum_{i<j in S} min(i,j)),
// split by |S|. Sites are scanned from last down to first with k = number of
// already-placed sites to the right; placing site i adds coupling * i * k,
// because min(i, j) = i for every j > i.
std::vector<double> subset_log_weights(std::int64_t first, std::int64_t last,
                                       double log_rho, double coupling) {
  const std::int64_t sites = std::max<std::int64_t>(0, last - first + 1);
  std::vector<double> w(static_cast<std::size_t>(sites + 1), kNegInf);
  w[0] = 0.0;
  if (log_rho == kNegInf) return w;
  std::int64_t placed_max = 0;
  for (std::int64_t i = last; i >= first; --i) {
    for (std::int64_t k = placed_max; k >= 0; --k) {
      const auto ku = static_cast<std::size_t>(k);
      if (w[ku] == kNegInf) continue;
      const double add = w[ku] + log_rho +
                         coupling * static_cast<double>(i) * static_cast<double>(k);
      w[ku + 1] = log_add(w[ku + 1], add);
    }
    ++placed_max;
  }
  return w;
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

}  // namespace

void LatticeSpec::validate() const {
  if (n < 2) throw DomainError("lattice needs n >= 2");
  if (!(rho >= 0.0) || !std::isfinite(rho))
    throw DomainError("lattice fugacity must be finite and >= 0");
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw DomainError("lattice beta must be finite and >= 0");
}

std::vector<double> particle_number_log_weights(const LatticeSpec& spec) {
  spec.validate();
  const double nn = static_cast<double>(spec.n);
  return subset_log_weights(1, spec.n - 1, safe_log(spec.rho),
                            2.0 * spec.beta / (nn * nn));
}

double grand_partition_log(const LatticeSpec& spec) {
  return log_sum(particle_number_log_weights(spec));
}

FiniteLatticeState finite_lattice_state(const LatticeSpec& spec) {
  const auto w = particle_number_log_weights(spec);
  FiniteLatticeState s;
  s.log_z = log_sum(w);
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double p = std::exp(w[k] - s.log_z);
    const double kk = static_cast<double>(k);
    m1 += p * kk;
    m2 += p * kk * kk;
  }
  const double nn = static_cast<double>(spec.n);
  s.mean_particles = m1;
  s.var_particles = std::max(0.0, m2 - m1 * m1);
  s.density = m1 / nn;
  s.pressure = spec.beta > 0.0 ? s.log_z / (spec.beta * nn)
                               : std::numeric_limits<double>::infinity();
  return s;
}

double finite_fugacity(std::int64_t n, double density, double beta) {
  const double nn = static_cast<double>(n);
  if (n < 2) throw DomainError("lattice needs n >= 2");
  if (!(density > 0.0 && density < (nn - 1.0) / nn))
    throw DomainError("finite-lattice density must lie in (0, (n-1)/n)");
  auto density_at = [&](double log_rho) {
    return finite_lattice_state({n, std::exp(log_rho), beta}).density;
  };
  double lo = -40.0;
  double hi = 40.0;
  while (density_at(lo) > density) lo *= 2.0;
  while (density_at(hi) < density) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (density_at(mid) < density ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

double exact_mean(const ModelParams& params) {
  params.validate();
  const double coupling = params.sigma * params.sigma * params.tau;
  const auto w = subset_log_weights(0, params.n - 1, safe_log(params.rho), coupling);
  return std::log(params.x0) + log_sum(w);
}

double lattice_convention_mean(const ModelParams& params) {
  params.validate();
  if (params.n < 2) return std::log(params.x0);
  return std::log(params.x0) +
         grand_partition_log({params.n, params.rho, params.beta()});
}

double brute_mean(const ModelParams& params) {
  params.validate();
  if (params.n > kBruteMaxSteps)
    throw SizeError("brute_mean enumerates 2^n subsets; n must be <= " +
                    std::to_string(kBruteMaxSteps));
  const auto n = static_cast<unsigned>(params.n);
  const double log_rho = safe_log(params.rho);
  const double coupling = params.sigma * params.sigma * params.tau;

  // Exact integer multiplicities of (|S|, sum_{i<j} min(i,j)).
  std::map<std::pair<unsigned, std::int64_t>, std::uint64_t> counts;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::int64_t pair_sum = 0;
    for (unsigned i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) continue;
      const auto above = static_cast<std::int64_t>(std::popcount(mask >> (i + 1)));
      pair_sum += static_cast<std::int64_t>(i) * above;
    }
    ++counts[{static_cast<unsigned>(std::popcount(mask)), pair_sum}];
  }
  std::vector<double> terms;
  terms.reserve(counts.size());
  for (const auto& [key, count] : counts) {
    const auto [size, pair_sum] = key;
    if (size > 0 && log_rho == kNegInf) continue;
    const double size_term = size == 0 ? 0.0 : static_cast<double>(size) * log_rho;
    terms.push_back(std::log(static_cast<double>(count)) + size_term +
                    coupling * static_cast<double>(pair_sum));
  }
  return std::log(params.x0) + log_sum(terms);
}

double finite_lyapunov(const ModelParams& params) {
  return (exact_mean(params) - std::log(params.x0)) / static_cast<double>(params.n);
}

double finite_lyapunov(double rho, double T, std::int64_t n, double tau) {
  return finite_lyapunov(ModelParams::at_temperature(rho, T, n, tau));
}

SpectrumDescriptor spectrum(std::int64_t n, std::int64_t particles) {
  if (n < 2) throw DomainError("lattice needs n >= 2");
  if (particles < 0 || particles > n - 1)
    throw DomainError("particle number must lie in [0, n-1]");
  const double nn = static_cast<double>(n);
  const double N = static_cast<double>(particles);
  SpectrumDescriptor s;
  s.n = n;
  s.particles = particles;
  s.ground_energy = N * (N - 1.0) * (2.0 * N + 2.0 - 3.0 * nn) / (3.0 * nn * nn);
  s.levels.resize(static_cast<std::size_t>(particles + 1));
  for (std::int64_t k = 0; k <= particles; ++k) {
    const double kk = static_cast<double>(k);
    s.levels[static_cast<std::size_t>(k)] =
        2.0 / (nn * nn) * kk * (N - 0.5 * (kk + 1.0));
  }
  s.boson_count = n - particles - 1;
  return s;
}

bool verify_spectrum(std::int64_t n, std::int64_t particles) {
  if (n < 2 || n > kSpectrumMaxSites)
    throw SizeError("verify_spectrum needs 2 <= n <= " +
                    std::to_string(kSpectrumMaxSites));
  if (particles < 0 || particles > n - 1)
    throw SizeError("particle number must lie in [0, n-1]");
  const std::int64_t N = particles;

  // Pair-energy side, n^2 E = -2 sum_{a<b} min(i_a, i_b) over placements on
  // sites 1..n-1 (sorted placements make min(i_a, i_b) = i_a).
  std::vector<std::int64_t> direct;
  std::vector<std::int64_t> sites;
  std::function<void(std::int64_t)> place = [&](std::int64_t next) {
    if (static_cast<std::int64_t>(sites.size()) == N) {
      std::int64_t e = 0;
      for (std::size_t a = 0; a < sites.size(); ++a)
        e -= 2 * sites[a] * static_cast<std::int64_t>(sites.size() - a - 1);
      direct.push_back(e);
      return;
    }
    for (std::int64_t i = next; i <= n - 1; ++i) {
      sites.push_back(i);
      place(i + 1);
      sites.pop_back();
    }
  };
  place(1);

  // Boson side: n^2 E0 = N(N-1)(2N+2-3n)/3 and n^2 w_k = k(2N-k-1), both
  // integers; y_k is the k-th gap (empty sites before particle k+1, y_N the
  // empty sites after the last particle).
  const std::int64_t ground = N * (N - 1) * (2 * N + 2 - 3 * n) / 3;
  std::vector<std::int64_t> boson;
  std::function<void(std::int64_t, std::int64_t, std::int64_t)> fill =
      [&](std::int64_t k, std::int64_t remaining, std::int64_t energy) {
        const std::int64_t level = k * (2 * N - k - 1);
        if (k == N) {
          boson.push_back(ground + energy + remaining * level);
          return;
        }
        for (std::int64_t y = 0; y <= remaining; ++y)
          fill(k + 1, remaining - y, energy + y * level);
      };
  fill(0, n - N - 1, 0);

  std::sort(direct.begin(), direct.end());
  std::sort(boson.begin(), boson.end());
  return direct == boson;
}

}  // namespace rmp
