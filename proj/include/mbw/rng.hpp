#ifndef MBW_RNG_HPP
#define MBW_RNG_HPP

#include <cstdint>
#include <random>

namespace mbw {

/// Identifies a reproducible random sequence. Replicate r of a study uses
/// stream id r under the study's seed.
struct SeededStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// 64-bit Mersenne Twister keyed through std::seed_seq on (seed, stream).
/// Both are fully specified by the standard, so sequences are bit-identical
/// across platforms. Single owner; not thread-safe.
class RandomStream {
 public:
  explicit RandomStream(SeededStream id);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform index in [0, n) by rejection, unbiased.
  std::uint64_t index(std::uint64_t n);

  SeededStream id() const { return id_; }

 private:
  SeededStream id_;
  std::mt19937_64 engine_;
};

/// Mixes two 64-bit values into a seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt);

}  // namespace mbw

#endif  // MBW_RNG_HPP
