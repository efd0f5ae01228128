#include "cbp/synth.hpp"

#include "cbp/error.hpp"
#include "rng.hpp"

namespace cbp {

std::uint64_t frame_seed(std::uint64_t stream_seed, int frame_index) {
  return detail::frame_seed(stream_seed, frame_index);
}

Frame random_frame(int rows, int cols, int channels, std::uint64_t seed) {
  require(rows > 0 && cols > 0, Errc::invalid_argument, "bad frame geometry");
  require(channels == 1 || channels == 3, Errc::invalid_argument, "channels must be 1 or 3");
  detail::UniformRng rng(seed);
  Frame f;
  f.planes.assign(static_cast<std::size_t>(channels), ImagePlane(rows, cols));
  for (ImagePlane& p : f.planes)
    for (int c = 0; c < cols; ++c)
      for (int r = 0; r < rows; ++r) p(r, c) = rng.next();
  return f;
}

}  // namespace cbp
