#pragma once

#include <cstdint>
#include <random>

namespace gaitid {

/// Portable seeded random stream.
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are implementation-defined, so the
/// integer, uniform and normal draws are implemented here on top of the raw
/// 64-bit output; results are bit-identical across platforms and compilers.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller (the second variate is discarded so the
  /// stream position is independent of call history).
  double normal(double mean, double sigma);

private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives the seed of child stream `index` from `parent`. Used for per-tree,
/// per-fold, per-user and per-recording streams so that results never depend
/// on evaluation order.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

}  // namespace gaitid
