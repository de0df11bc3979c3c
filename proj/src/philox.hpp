#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11) and a normal
// variate stream addressed by (seed, stream, index). Any path can be
// regenerated independently of how work is split across threads.

#include <array>
#include <cstdint>

namespace radner::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

Counter philox4x32_10(Counter ctr, Key key);

class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint32_t stream, std::uint64_t index);

  // Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  double normal();

 private:
  Counter next_block();

  Key key_;
  Counter ctr_;
  std::array<double, 2> spare_{};
  bool has_spare_ = false;
};

}  // namespace radner::rng
