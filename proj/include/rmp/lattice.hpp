#pragma once

#include <cstdint>
#include <vector>

#include "rmp/params.hpp"

namespace rmp {

/// Lattice gas on sites 1..n-1 with hard-core exclusion, pair energy
/// -(2/n^2) min(i, j), fugacity rho and inverse temperature beta.
struct LatticeSpec {
  std::int64_t n = 2;
  double rho = 0.0;
  double beta = 0.0;

  void validate() const;
};

/// log of the weight of each particle number: entry N is
/// log(rho^N Z_N(beta)), N = 0..n-1.
std::vector<double> particle_number_log_weights(const LatticeSpec& spec);

/// log of the grand partition function sum_N rho^N Z_N(beta). O(n^2).
double grand_partition_log(const LatticeSpec& spec);

/// Grand-canonical occupation statistics of a finite lattice.
struct FiniteLatticeState {
  double log_z = 0.0;
  double mean_particles = 0.0;
  double var_particles = 0.0;
  double density = 0.0;   ///< <N>/n
  double pressure = 0.0;  ///< T log Z / n
};

FiniteLatticeState finite_lattice_state(const LatticeSpec& spec);

/// Fugacity at which the finite lattice has <N>/n = density (bisection in
/// log rho; <N> is increasing in rho). Throws DomainError unless
/// 0 < density < (n-1)/n.
double finite_fugacity(std::int64_t n, double density, double beta);

/// log <x_n> from the Gaussian moment expansion
///   <x_n> = x0 sum_{S in {0..n-1}} rho^|S| exp(sigma^2 tau sum_{i<j in S} min(i,j)),
/// evaluated by the right-to-left subset recursion.
double exact_mean(const ModelParams& params);

/// log(x0 Z) with Z the (n-1)-site grand partition function: the lattice
/// convention without the deterministic (1 + rho) factor of index 0.
double lattice_convention_mean(const ModelParams& params);

/// Same quantity as exact_mean by enumerating all 2^n subsets. Throws
/// SizeError for n > 20.
double brute_mean(const ModelParams& params);

inline constexpr std::int64_t kBruteMaxSteps = 20;

/// (log <x_n> - log x0) / n.
double finite_lyapunov(const ModelParams& params);

/// finite_lyapunov with sigma chosen so that the lattice temperature is T.
double finite_lyapunov(double rho, double T, std::int64_t n, double tau = 1.0);

/// Boson representation of the N-particle sector: E = E0 + sum_k y_k w_k with
/// sum_k y_k = n - N - 1.
struct SpectrumDescriptor {
  std::int64_t n = 0;
  std::int64_t particles = 0;
  double ground_energy = 0.0;
  std::vector<double> levels;  ///< w_k, k = 0..N
  std::int64_t boson_count = 0;
};

SpectrumDescriptor spectrum(std::int64_t n, std::int64_t particles);

/// Compares the multiset of pair-interaction energies of all C(n-1, N)
/// placements with the multiset E0 + sum y_k w_k over all occupation vectors.
/// Energies are compared exactly as integers n^2 E. Requires n <= 18.
bool verify_spectrum(std::int64_t n, std::int64_t particles);

inline constexpr std::int64_t kSpectrumMaxSites = 18;

}  // namespace rmp
