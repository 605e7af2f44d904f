#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace htmlforge {

/// Seeded generator with platform-stable derived distributions.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard distributions are not, so integer, real and
/// normal draws are derived here to keep example streams byte-identical
/// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Uniform real in [0, 1) with 53 bits of precision.
  double uniform01();

  /// Normal draw via Box-Muller.
  double normal(double mean, double stddev);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t splitmix64(std::uint64_t x);

/// Per-document seed so that generation does not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view doc_id);

}  // namespace htmlforge
