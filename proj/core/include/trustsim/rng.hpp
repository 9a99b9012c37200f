#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace trustsim {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Stream tags keep per-purpose generators apart.
enum class Stream : std::uint64_t {
  world = 1,
  trustee,
  truster,
  witness,
  broker,
  population,
  su,
  band,
  learner,
};

/// Derives independent generators from one master seed, so that the draws of
/// one agent never depend on how many draws another agent made.
class RngStreams {
 public:
  explicit RngStreams(std::uint64_t master) : master_(master) {}

  [[nodiscard]] Rng make(Stream tag, std::uint64_t index = 0) const {
    std::uint64_t s = splitmix64(master_);
    s = splitmix64(s ^ static_cast<std::uint64_t>(tag));
    s = splitmix64(s ^ index);
    return Rng(s);
  }

  [[nodiscard]] std::uint64_t master() const { return master_; }

 private:
  std::uint64_t master_;
};

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace trustsim
