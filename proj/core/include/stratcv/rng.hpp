#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace stratcv {

/// Seedable 64-bit random stream.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the standard.
/// The conversions to uniform reals, bounded integers and normals are done
/// here rather than through <random> distributions, whose algorithms are
/// implementation-defined, so a seed reproduces the same draws on every
/// toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream derived from a master seed and a label, e.g.
  /// derive(seed, "sim", 3). Uses a stable hash, never std::hash.
  static Rng derive(std::uint64_t master_seed, std::string_view label,
                    std::uint64_t index = 0);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  /// Standard normal (Marsaglia polar method, spare value cached).
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace stratcv
