#pragma once

#include <array>
#include <cstdint>

namespace enfsim {

// xoshiro256++ with splitmix64 seeding. Every stochastic element of the
// simulator draws from one of these so runs are reproducible per seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // uniform in [0, 1)
  double uniform();

  // N(0,1) via Box-Muller. Used where sample quality matters more than
  // throughput (ENF synthesis).
  double gaussian();

  // N(0,1) from a 65536-entry inverse-CDF table (~3 ns/sample). Used for
  // pixel and audio noise floors where millions of draws are needed.
  float gaussian_fast();

 private:
  std::array<std::uint64_t, 4> state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace enfsim
