#pragma once

#include <cstdint>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

namespace rmp {

/// Underlying bit generator for every stochastic computation.
using Engine = boost::random::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of sub-stream `stream` of the master seed. Streams are what make
/// results independent of how paths are partitioned across workers.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/// Standard normal variates (ziggurat) on a dedicated engine.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double operator()() { return normal_(engine_); }

 private:
  Engine engine_;
  boost::random::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace rmp
