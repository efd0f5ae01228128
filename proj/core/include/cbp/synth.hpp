#pragma once

#include <cstdint>

#include "cbp/image.hpp"

namespace cbp {

// Per-frame seed derived from a stream seed; stable across platforms.
std::uint64_t frame_seed(std::uint64_t stream_seed, int frame_index);

// Deterministic uniform-noise frame in [0,1), identical bytes on every platform.
Frame random_frame(int rows, int cols, int channels, std::uint64_t seed);

}  // namespace cbp
