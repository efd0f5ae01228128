#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "cbp/encoder.hpp"

namespace cbp {

enum class StreamRole { Latent, Public, Private };

const char* stream_role_name(StreamRole r);
StreamRole stream_role_from_name(const std::string& s);

/* Stream directory layout: manifest.json plus frame_000000.{pfm,pgm,ppm} ...
   PFM for float32, PGM/PPM (maxval 255 / 65535, 16-bit big-endian) for u8/u16. */
struct StreamManifest {
  int version = 1;
  StreamRole role = StreamRole::Latent;
  int frame_count = 0;
  int width = 0;   // columns
  int height = 0;  // rows
  BitDepth bit_depth = BitDepth::f32;
  std::string pair_id;
  std::optional<int> kernel_width_hint;
  std::optional<std::uint64_t> seed;
};

void write_stream(const std::vector<Frame>& frames, const StreamManifest& manifest,
                  const std::filesystem::path& dir);

std::pair<std::vector<Frame>, StreamManifest> read_stream(const std::filesystem::path& dir);

/* Join two stream directories into per-index blurred pairs; pair_id, frame
   count and dimensions must line up. The width hint survives only when both
   manifests agree on it. */
std::vector<BlurredPair> pair_streams(const std::filesystem::path& public_dir,
                                      const std::filesystem::path& private_dir);

}  // namespace cbp
