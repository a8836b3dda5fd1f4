#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace loopzeta {

/// Philox4x32-10 counter-based block function (Salmon et al., Random123).
/// Pure: the same (counter, key) always yields the same four words.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key);

/// Deterministic random stream keyed by a 64-bit seed and a 64-bit stream id.
///
/// The seed forms the Philox key; the stream id occupies the upper half of the
/// 128-bit counter and a running block index the lower half, so streams with
/// different ids never overlap. Gaussian and Poisson variates are generated by
/// fixed algorithms (Box–Muller, inversion / PTRS) rather than the
/// implementation-defined <random> distributions, which keeps outputs
/// reproducible across standard libraries.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform in the open interval (0, 1) with 53 random bits.
  double uniform();

  /// Standard normal.
  double normal();

  /// Poisson variate with the given mean (mean >= 0).
  std::uint64_t poisson(double mean);

  /// Index drawn with probability proportional to weights[i] (all >= 0, sum > 0).
  std::size_t categorical(std::span<const double> weights);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_id_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffer_pos_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace loopzeta
