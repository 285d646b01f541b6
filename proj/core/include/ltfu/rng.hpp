#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ltfu {

/// Seeded pseudo-random stream with named, independent substreams.
///
/// Built on mt19937_64 plus hand-rolled variate transforms, so the produced
/// sequence depends only on the seed (std::*_distribution is unspecified and
/// would differ between standard libraries). Transcendental variates inherit
/// the bit behavior of the platform libm; the integer and uniform layers are
/// exact everywhere.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  /// Independent child stream derived from this stream's seed and a label.
  /// Does not consume state of the parent.
  RngStream substream(std::string_view label) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1]; safe under log().
  double uniform_pos();
  /// Unbiased integer in [0, bound), bound >= 1.
  std::uint64_t uniform_int(std::uint64_t bound);

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller (two uniforms per draw).
  double normal();
  double exponential(double rate);
  /// Gamma with given shape and scale (Marsaglia-Tsang).
  double gamma(double shape, double scale);
  /// Poisson count by Knuth multiplication; intended for small means.
  long poisson(double mean);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; good avalanche for seed derivation.
std::uint64_t splitmix64(std::uint64_t x);

/// FNV-1a over a label, used to fold stage names into seeds.
std::uint64_t fnv1a64(std::string_view s);

/// Deterministic per-stage seed: hash(master seed, stage name).
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view stage);

}  // namespace ltfu
