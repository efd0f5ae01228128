#pragma once

#include <cstdint>
#include <random>

namespace cbp::detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/* mt19937_64 with a hand-rolled uniform so the draw sequence does not depend
   on the standard library's distribution implementation. */
class UniformRng {
 public:
  explicit UniformRng(std::uint64_t seed) : eng_(seed) {}
  double next() { return double(eng_() >> 11) * 0x1.0p-53; }  // [0,1)
  std::uint64_t next_u64() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

inline std::uint64_t frame_seed(std::uint64_t stream_seed, int frame_index) {
  return splitmix64(stream_seed ^ (0x9E3779B97F4A7C15ull * std::uint64_t(frame_index) + 1));
}

}  // namespace cbp::detail
