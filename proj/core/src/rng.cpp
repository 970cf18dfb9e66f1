#include "covlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace covlab {
namespace {

constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline std::array<std::uint32_t, 4> philox_round(const std::array<std::uint32_t, 4>& c,
                                                 const std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMult0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMult1) * c[2];
  return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
          static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
          static_cast<std::uint32_t>(p0)};
}

}  // namespace

std::array<std::uint32_t, 4> RandomStream::block(std::array<std::uint32_t, 4> counter,
                                                 std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round != 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    counter = philox_round(counter, key);
  }
  return counter;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint32_t id_hi, std::uint32_t id_mid,
                           std::uint32_t id_lo) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      id_{id_lo, id_mid, id_hi} {}

void RandomStream::refill() {
  buffer_ = block({block_index_++, id_[0], id_[1], id_[2]}, key_);
  buffer_pos_ = 0;
}

std::uint32_t RandomStream::next_u32() {
  if (buffer_pos_ >= 4) refill();
  return buffer_[buffer_pos_++];
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t hi = next_u32();
  const std::uint64_t lo = next_u32();
  return (hi << 32) | lo;
}

double RandomStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_oc() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RandomStream::gaussian() {
  if (has_spare_gaussian_) {
    has_spare_gaussian_ = false;
    return spare_gaussian_;
  }
  const double u1 = uniform_oc();
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_gaussian_ = radius * std::sin(angle);
  has_spare_gaussian_ = true;
  return radius * std::cos(angle);
}

RandomStream RandomStream::split() {
  const std::uint64_t child_seed = next_u64();
  const std::uint32_t child_hi = next_u32();
  return RandomStream(child_seed, child_hi);
}

}  // namespace covlab
