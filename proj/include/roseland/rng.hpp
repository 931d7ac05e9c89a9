#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace roseland {

/// Deterministic random stream: xoshiro256** seeded through splitmix64.
///
/// The integer stream, uniform doubles and bounded integers use integer
/// arithmetic plus exact IEEE scaling, so a seed yields the same values on
/// every platform. Normals additionally go through libm log/sin/cos and can
/// differ in the last bit between libm implementations. `split(k)` derives an
/// independent child stream from the original seed and the stream id; it does
/// not advance the parent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Standard normal via Box-Muller; the second variate is cached.
  double normal();
  /// Uniform integer in [0, n). Unbiased (Lemire's multiply-shift rejection).
  std::size_t below(std::size_t n);

  [[nodiscard]] Rng split(std::uint64_t stream) const;
  [[nodiscard]] std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace roseland
