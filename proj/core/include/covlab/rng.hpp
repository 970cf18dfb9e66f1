#pragma once

#include <array>
#include <cstdint>

namespace covlab {

/// Counter-based random stream (Philox4x32-10).
///
/// A stream is identified by a 64-bit seed plus three 32-bit stream ids.
/// Distinct id tuples under the same seed give statistically independent
/// streams, so parallel workers can construct their streams directly from
/// loop indices and reproduce a run regardless of scheduling. Streams are
/// small value types meant to be owned by a single thread; share nothing,
/// split instead.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint32_t id_hi = 0,
                        std::uint32_t id_mid = 0, std::uint32_t id_lo = 0) noexcept;

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01();
  /// Uniform on (0, 1]; safe to pass through log().
  double uniform_oc();
  /// Standard normal via Box-Muller; the paired variate is cached.
  double gaussian();

  /// Child stream keyed by fresh randomness drawn from this stream.
  RandomStream split();

  /// One raw Philox4x32-10 block. Exposed so tests can check the
  /// published known-answer vectors.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 3> id_;
  std::uint32_t block_index_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffer_pos_ = 4;
  double spare_gaussian_ = 0.0;
  bool has_spare_gaussian_ = false;
};

}  // namespace covlab
