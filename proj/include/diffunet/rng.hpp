#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace diffunet {

/// Mixes (master, trial, stream) into an independent 64-bit seed using a
/// splitmix64 chain. Distinct tuples give statistically unrelated seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t stream);

/// Seedable generator with portable uniform and Gaussian draws.
///
/// The engine is std::mt19937_64 (its output sequence is fixed by the
/// standard). Uniforms take the top 53 bits of one engine output. Gaussians
/// use the Box-Muller transform, returning the cosine branch first and the
/// sine branch on the next call. Neither step goes through the
/// implementation-defined std distributions, so a seed reproduces the same
/// draws on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Generator for substream `stream` of trial `trial`.
  static Rng substream(std::uint64_t master, std::uint64_t trial, std::uint64_t stream) {
    return Rng(derive_seed(master, trial, stream));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform();

  /// Standard normal draw.
  double gaussian();

  double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

// Reserved substream ids. Node streams use the node index (0-based).
inline constexpr std::uint64_t kGroundTruthStream = 0x1'0000'0000ULL;
inline constexpr std::uint64_t kTopologyStream = 0x1'0000'0001ULL;

}  // namespace diffunet
