#ifndef LANGEVIN_RNG_HPP
#define LANGEVIN_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace langevin {

/// Reproducible random stream. (seed, stream_id) fully determines the sequence;
/// distinct stream ids give statistically independent streams.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  double normal() { return normal_(engine_); }
  /// Uniform on (0, 1), never exactly 0.
  double uniform();
  double exponential() { return -std::log(uniform()); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

/// SplitMix64 finalizer; used to derive sub-seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed for a named sub-experiment, so related runs do not share streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace langevin

#endif  // LANGEVIN_RNG_HPP
