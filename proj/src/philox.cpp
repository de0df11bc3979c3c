#include "philox.hpp"

#include <cmath>
#include <numbers>

namespace radner::rng {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}

double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(hi >> 5) << 26) | static_cast<std::uint64_t>(lo >> 6);
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

Counter philox4x32_10(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kMul0, ctr[0], lo0, hi0);
    mulhilo(kMul1, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

NormalStream::NormalStream(std::uint64_t seed, std::uint32_t stream, std::uint64_t index)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      ctr_{0u, stream, static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)} {}

Counter NormalStream::next_block() {
  const Counter out = philox4x32_10(ctr_, key_);
  ++ctr_[0];
  return out;
}

double NormalStream::uniform() {
  const Counter block = next_block();
  return to_unit(block[0], block[1]);
}

double NormalStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_[0];
  }
  const Counter block = next_block();
  const double u1 = to_unit(block[0], block[1]);
  const double u2 = to_unit(block[2], block[3]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_[0] = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

}  // namespace radner::rng
