#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cbp/image.hpp"
#include "cbp/kernel.hpp"

namespace cbp {

inline constexpr double kDefaultMarginThreshold = 1e-6;
inline constexpr int kDefaultCoprimalityTrials = 4;
inline constexpr int kDefaultMaxRetries = 16;

/* Coprimality margin: minimum over random unit-circle restrictions (both
   axes) of sigma_min/sigma_max of the Sylvester matrix of the restricted 1D
   pair. Deterministic (fixed internal point seed). 1 means trivially coprime
   (both restrictions constant), 0 means degenerate. */
double coprimality_check(const BlurKernel& k1, const BlurKernel& k2,
                         int trials = kDefaultCoprimalityTrials);

/* Draw i.i.d. uniform kernels (each normalized to sum 1) from a seeded
   generator until the coprimality margin clears the threshold. */
CoprimePair generate_coprime_pair(int width, std::uint64_t seed,
                                  int max_retries = kDefaultMaxRetries,
                                  double margin_threshold = kDefaultMarginThreshold,
                                  int trials = kDefaultCoprimalityTrials);

struct BlurredPair {
  Frame public_frame, private_frame;
  std::optional<int> kernel_width_hint;
  std::string pair_id;
};

/* Blur every plane with k1 (public stream) and k2 (private stream). */
BlurredPair encode_frame(const Frame& latent, const CoprimePair& pair);

/* Round samples to the nearest k/(2^b - 1) level; depth must be u8 or u16. */
Frame quantize_frame(const Frame& f, BitDepth depth);

/* Zero the `drop` least significant bits of every quantized sample. */
Frame degrade_bits(const Frame& f, int drop);

}  // namespace cbp
