#pragma once

#include <array>
#include <cstdint>

namespace ethf {

// Deterministic, splittable PRNG used everywhere in the library.
// xoshiro256++ core seeded through splitmix64; child streams for ensemble
// realizations are derived with mix(master, index) so that any shard of an
// ensemble can reproduce its own realizations independently of the others.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // uniform on [0, 1)
  double uniform01();

  // uniform on (0, 1]; never returns 0, safe under log()
  double uniform_open01();

  // uniform integer in [0, bound), unbiased (rejection sampling)
  std::uint64_t uniform_below(std::uint64_t bound);

  // standard normal via Box-Muller; one spare value is cached
  double normal();

  // stateless seed derivation: child = mix(master, index)
  static std::uint64_t mix(std::uint64_t master, std::uint64_t index);

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ethf
