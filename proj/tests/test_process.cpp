#include <cmath>
#include <numeric>

#include "doctest.h"
#include "rmp/errors.hpp"
#include "rmp/lattice.hpp"
#include "rmp/process.hpp"

using namespace rmp;

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((ModelParams{1.0, 0.1, 1.0, 4, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((ModelParams{-0.1, 0.1, 1.0, 4, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((ModelParams{0.1, -1.0, 1.0, 4, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((ModelParams{0.1, 0.1, 0.0, 4, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((ModelParams{0.1, 0.1, 1.0, 0, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((ModelParams{0.1, 0.1, 1.0, 4, 0.0}.validate()), DomainError);
  CHECK_NOTHROW((ModelParams{0.0, 0.0, 1.0, 1, 1.0}.validate()));
}

TEST_CASE("temperature parameterization") {
  const auto p = ModelParams::at_temperature(0.1, 0.25, 50, 0.5);
  CHECK(p.beta() == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(p.temperature() == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(std::isinf(ModelParams{0.1, 0.0, 1.0, 5, 1.0}.temperature()));
}

TEST_CASE("multiplier covariance") {
  const ModelParams p{0.3, 0.7, 0.5, 6, 1.0};
  for (std::int64_t i = 0; i < 6; ++i)
    for (std::int64_t j = 0; j < 6; ++j) {
      const double tmin = 0.5 * static_cast<double>(std::min(i, j));
      CHECK(multiplier_covariance(p, i, j) ==
            doctest::Approx(0.09 * (std::exp(0.49 * tmin) - 1.0)).epsilon(1e-13));
    }
  CHECK(multiplier_covariance(p, 0, 4) == 0.0);
  CHECK_THROWS_AS(multiplier_covariance(p, 6, 0), RangeError);
  CHECK_THROWS_AS(multiplier_covariance(p, 0, -1), RangeError);
}

TEST_CASE("sample path structure") {
  const ModelParams p{0.2, 0.4, 0.3, 30, 2.0};
  const auto path = sample_path(p, 99);
  REQUIRE(path.multipliers.size() == 30);
  REQUIRE(path.states.size() == 31);
  CHECK(path.states[0] == 2.0);
  CHECK(path.brownian[0] == 0.0);
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(path.times[i] == doctest::Approx(0.3 * static_cast<double>(i)));
    const double a = 1.0 + 0.2 * std::exp(0.4 * path.brownian[i] - 0.08 * path.times[i]);
    CHECK(path.multipliers[i] == doctest::Approx(a).epsilon(1e-14));
    CHECK(path.multipliers[i] > 1.0);
    CHECK(path.states[i + 1] == doctest::Approx(path.states[i] * path.multipliers[i]).epsilon(1e-14));
    CHECK(std::exp(path.log_states[i + 1]) == doctest::Approx(path.states[i + 1]).epsilon(1e-12));
  }
  const auto again = sample_path(p, 99);
  CHECK(again.states == path.states);
  CHECK(sample_log_terminal(p, 99) == path.log_states.back());
  CHECK(sample_path(p, 100).states != path.states);
}

TEST_CASE("deterministic process") {
  const ModelParams p{0.25, 0.0, 1.0, 40, 3.0};
  const auto mc = mc_mean(p, 50, 1);
  CHECK(mc.estimate == doctest::Approx(3.0 * std::pow(1.25, 40)).epsilon(1e-13));
  CHECK(mc.std_error == 0.0);
  CHECK(mc.log_estimate == doctest::Approx(exact_mean(p)).epsilon(1e-13));
  CHECK_FALSE(mc.heavy_tail);
  CHECK_THROWS_AS(mc_mean(p, 1, 1), SizeError);
}

TEST_CASE("Monte Carlo mean matches the exact mean") {
  const ModelParams p{0.3, 0.15, 1.0, 12, 1.0};
  const auto mc = mc_mean(p, 20000, 2024);
  const double exact = std::exp(exact_mean(p));
  CHECK(std::abs(mc.estimate - exact) < 4.0 * mc.std_error);
  CHECK(mc.num_paths == 20000);
  CHECK(mc.overflow_paths == 0);
}

TEST_CASE("Monte Carlo result does not depend on the worker count") {
  const ModelParams p{0.1, 0.3, 1.0, 20, 1.0};
  const auto a = mc_mean(p, 3001, 5, McOptions{1, 50.0});
  const auto b = mc_mean(p, 3001, 5, McOptions{3, 50.0});
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);
  CHECK(a.kurtosis == b.kurtosis);
}

TEST_CASE("overflowing paths are rescaled in log space") {
  const ModelParams p{0.9, 0.01, 1.0, 2000, 1.0};
  const auto mc = mc_mean(p, 20, 3);
  CHECK(mc.overflow_paths == 20);
  CHECK(std::isfinite(mc.log_estimate));
  CHECK(mc.log_estimate > 709.0);
}

TEST_CASE("multiplier moments") {
  const ModelParams p{0.4, 0.5, 1.0, 8, 1.0};
  const std::vector<std::int64_t> idx{0, 2, 5};
  const auto m = multiplier_moments(p, idx, 40000, 11);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    CHECK(std::abs(m.mean[a] - 1.4) < 4.0 * m.mean_std_error[a] + 1e-11);
    for (std::size_t b = 0; b < idx.size(); ++b) {
      const double expect = multiplier_covariance(p, idx[a], idx[b]);
      CHECK(std::abs(m.cov[a][b] - expect) < 4.0 * m.cov_std_error[a][b] + 1e-11);
    }
  }
  CHECK_THROWS_AS(multiplier_moments(p, idx, 1, 1), SizeError);
}
