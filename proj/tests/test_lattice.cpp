#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "rmp/errors.hpp"
#include "rmp/lattice.hpp"

using namespace rmp;

namespace {

// Direct sum over all occupation patterns of sites 1..n-1.
double enumerated_log_z(std::int64_t n, double rho, double beta) {
  const int sites = static_cast<int>(n - 1);
  double z = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << sites); ++mask) {
    std::vector<int> occ;
    for (int s = 0; s < sites; ++s)
      if (mask & (1u << s)) occ.push_back(s + 1);
    double energy = 0.0;
    for (std::size_t a = 0; a < occ.size(); ++a)
      for (std::size_t b = a + 1; b < occ.size(); ++b)
        energy -= 2.0 / static_cast<double>(n * n) * std::min(occ[a], occ[b]);
    z += std::pow(rho, static_cast<double>(occ.size())) * std::exp(-beta * energy);
  }
  return std::log(z);
}

}  // namespace

TEST_CASE("grand partition function against enumeration") {
  for (std::int64_t n : {2, 3, 5, 8, 11})
    for (double rho : {0.05, 0.3, 0.9})
      for (double beta : {0.0, 0.7, 5.0}) {
        const LatticeSpec spec{n, rho, beta};
        CHECK(grand_partition_log(spec) ==
              doctest::Approx(enumerated_log_z(n, rho, beta)).epsilon(1e-12));
      }
}

TEST_CASE("particle-number weights") {
  const LatticeSpec spec{9, 0.4, 2.0};
  const auto w = particle_number_log_weights(spec);
  REQUIRE(w.size() == 9);
  CHECK(w[0] == doctest::Approx(0.0));
  CHECK(w[1] == doctest::Approx(std::log(8 * 0.4)).epsilon(1e-13));  // no pairs yet
  CHECK_THROWS_AS(particle_number_log_weights(LatticeSpec{1, 0.4, 1.0}), DomainError);
  CHECK_THROWS_AS(particle_number_log_weights(LatticeSpec{5, -0.1, 1.0}), DomainError);
}

TEST_CASE("occupation statistics") {
  const std::int64_t n = 30;
  const double beta = 3.0;
  const double rho = 0.2;
  const auto s = finite_lattice_state(LatticeSpec{n, rho, beta});
  // <N> = d log Z / d log rho, Var N = d <N> / d log rho.
  const double h = 1e-5;
  const auto up = finite_lattice_state(LatticeSpec{n, rho * std::exp(h), beta});
  const auto dn = finite_lattice_state(LatticeSpec{n, rho * std::exp(-h), beta});
  CHECK(s.mean_particles == doctest::Approx((up.log_z - dn.log_z) / (2 * h)).epsilon(1e-7));
  CHECK(s.var_particles ==
        doctest::Approx((up.mean_particles - dn.mean_particles) / (2 * h)).epsilon(1e-5));
  CHECK(s.density == doctest::Approx(s.mean_particles / n));
  CHECK(s.pressure == doctest::Approx(s.log_z / (beta * n)));
}

TEST_CASE("finite fugacity inverts the density") {
  for (double d : {0.05, 0.3, 0.6, 0.9}) {
    const double rho = finite_fugacity(50, d, 4.0);
    CHECK(finite_lattice_state(LatticeSpec{50, rho, 4.0}).density ==
          doctest::Approx(d).epsilon(1e-9));
  }
  CHECK_THROWS_AS(finite_fugacity(50, 0.99, 4.0), DomainError);
  CHECK_THROWS_AS(finite_fugacity(50, 0.0, 4.0), DomainError);
}

TEST_CASE("exact mean conventions") {
  const ModelParams p{0.3, 0.4, 0.5, 14, 2.5};
  const double log_z = grand_partition_log(LatticeSpec{14, 0.3, p.beta()});
  CHECK(lattice_convention_mean(p) == doctest::Approx(std::log(2.5) + log_z).epsilon(1e-13));
  CHECK(exact_mean(p) ==
        doctest::Approx(std::log(2.5) + std::log(1.3) + log_z).epsilon(1e-13));
}

TEST_CASE("exact mean against enumeration") {
  for (std::int64_t n = 1; n <= 14; ++n)
    for (double rho : {0.01, 0.1, 0.5})
      for (double s2 : {0.0, 0.1, 1.0}) {
        const ModelParams p{rho, std::sqrt(s2), 1.0, n, 1.0};
        CHECK(std::abs(std::expm1(exact_mean(p) - brute_mean(p))) < 1e-12);
      }
  CHECK_THROWS_AS(brute_mean(ModelParams{0.1, 0.1, 1.0, kBruteMaxSteps + 1, 1.0}), SizeError);
}

TEST_CASE("deterministic process") {
  const ModelParams p{0.2, 0.0, 1.0, 37, 1.0};
  CHECK(exact_mean(p) == doctest::Approx(37 * std::log1p(0.2)).epsilon(1e-13));
  CHECK(finite_lyapunov(p) == doctest::Approx(std::log1p(0.2)).epsilon(1e-13));
}

TEST_CASE("finite Lyapunov exponent is positive and decreasing in T") {
  for (double rho : {0.005, 0.05, 0.125}) {
    double prev = INFINITY;
    for (double T : {0.05, 0.1, 0.2, 0.5, 1.0, 5.0}) {
      const double l = finite_lyapunov(rho, T, 100);
      CHECK(l > 0.0);
      CHECK(l < prev);
      prev = l;
    }
  }
}

TEST_CASE("boson spectrum descriptor") {
  const std::int64_t n = 9;
  for (std::int64_t N = 0; N < n; ++N) {
    const auto s = spectrum(n, N);
    const double n2 = static_cast<double>(n * n);
    CHECK(s.ground_energy ==
          doctest::Approx(N * (N - 1.0) * (2.0 * N + 2.0 - 3.0 * n) / (3.0 * n2)));
    REQUIRE(s.levels.size() == static_cast<std::size_t>(N + 1));
    for (std::int64_t k = 0; k <= N; ++k)
      CHECK(s.levels[k] == doctest::Approx(k * (2.0 * N - k - 1.0) / n2));
    CHECK(s.boson_count == n - N - 1);
  }
  CHECK_THROWS_AS(spectrum(9, 9), DomainError);
}

TEST_CASE("boson spectrum reproduces the placement energies") {
  for (std::int64_t n = 2; n <= 11; ++n)
    for (std::int64_t N = 0; N < n; ++N) CHECK(verify_spectrum(n, N));
  CHECK_THROWS_AS(verify_spectrum(kSpectrumMaxSites + 1, 2), SizeError);
}

TEST_CASE("ground energy is that of the right-packed block") {
  // min(i, j) weighting favours particles on the highest sites n-N..n-1.
  for (std::int64_t n : {6, 10})
    for (std::int64_t N = 2; N < n; ++N) {
      double e_left = 0.0;
      for (std::int64_t a = 1; a <= N; ++a)
        for (std::int64_t b = a + 1; b <= N; ++b) e_left -= 2.0 * static_cast<double>(a);
      double e_right = 0.0;
      for (std::int64_t a = n - N; a < n; ++a)
        for (std::int64_t b = a + 1; b < n; ++b) e_right -= 2.0 * static_cast<double>(a);
      CHECK(spectrum(n, N).ground_energy * n * n == doctest::Approx(e_right));
      CHECK(e_right <= e_left);
    }
}
