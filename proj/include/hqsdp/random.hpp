#pragma once

#include <cstdint>
#include <random>

namespace hqsdp {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t splitmix64(std::uint64_t x);

/// Per-stream seed derivation: seed_i = splitmix64(root ^ splitmix64(i + golden)).
/// Every sampled quantity in the library draws from a stream obtained this way,
/// so results do not depend on evaluation order or thread count.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

/// Portable sampler on top of std::mt19937_64, whose output sequence is fixed
/// by the C++ standard. Distributions are implemented here rather than taken
/// from <random>, whose distribution algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1].
  double uniform_positive() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }
  /// Standard normal via Box-Muller; the second variate is cached.
  double normal();
  /// Unit-rate exponential.
  double exponential();
  /// Rademacher +/-1.
  double sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

enum class Execution { Serial, Parallel };

/// Worker count for the parallel kernels: HQSDP_THREADS when set, else the
/// OpenMP default.
int thread_count();

}  // namespace hqsdp
