#include "cbp/stream_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cbp/error.hpp"

namespace cbp {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string frame_name(int index, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06d.%s", index, ext);
  return buf;
}

const char* frame_ext(BitDepth depth, int channels) {
  if (depth == BitDepth::f32) return "pfm";
  return channels == 3 ? "ppm" : "pgm";
}

/* ---- PFM: float32, little-endian (negative scale), rows bottom to top ---- */

void write_pfm(const Frame& f, const fs::path& path) {
  const int rows = f.rows(), cols = f.cols(), ch = f.channels();
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::io_failure, "cannot open " + path.string());
  out << (ch == 3 ? "PF" : "Pf") << "\n" << cols << " " << rows << "\n-1.0\n";
  std::vector<float> row(static_cast<std::size_t>(cols) * ch);
  for (int r = rows - 1; r >= 0; --r) {
    for (int c = 0; c < cols; ++c)
      for (int k = 0; k < ch; ++k)
        row[static_cast<std::size_t>(c) * ch + k] = static_cast<float>(f.planes[k](r, c));
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  require(out.good(), Errc::io_failure, "short write on " + path.string());
}

Frame read_pfm(std::istream& in, const std::string& name) {
  std::string magic;
  int cols = 0, rows = 0;
  double scale = 0.0;
  in >> magic >> cols >> rows >> scale;
  require(in.good() && (magic == "Pf" || magic == "PF"), Errc::format_violation,
          name + ": bad float map header");
  require(cols > 0 && rows > 0, Errc::format_violation, name + ": bad dimensions");
  require(scale < 0.0, Errc::format_violation, name + ": big-endian float maps unsupported");
  in.get();  // single whitespace byte before raster
  const int ch = magic == "PF" ? 3 : 1;
  Frame f;
  f.planes.assign(ch, ImagePlane(rows, cols));
  std::vector<float> row(static_cast<std::size_t>(cols) * ch);
  for (int r = rows - 1; r >= 0; --r) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(float)));
    require(in.good(), Errc::format_violation, name + ": truncated raster");
    for (int c = 0; c < cols; ++c)
      for (int k = 0; k < ch; ++k)
        f.planes[k](r, c) = row[static_cast<std::size_t>(c) * ch + k];
  }
  return f;
}

/* ---- PGM/PPM: maxval 255 or 65535, 16-bit big-endian, rows top to bottom ---- */

void write_pnm(const Frame& f, const fs::path& path) {
  const int rows = f.rows(), cols = f.cols(), ch = f.channels();
  const int maxv = f.bit_depth == BitDepth::u8 ? 255 : 65535;
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::io_failure, "cannot open " + path.string());
  out << (ch == 3 ? "P6" : "P5") << "\n" << cols << " " << rows << "\n" << maxv << "\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(cols) * ch * (maxv > 255 ? 2 : 1));
  for (int r = 0; r < rows; ++r) {
    std::size_t at = 0;
    for (int c = 0; c < cols; ++c)
      for (int k = 0; k < ch; ++k) {
        long v = std::lround(f.planes[k](r, c) * maxv);
        v = std::min<long>(std::max<long>(v, 0), maxv);
        if (maxv > 255) row[at++] = static_cast<unsigned char>(v >> 8);
        row[at++] = static_cast<unsigned char>(v & 0xff);
      }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  require(out.good(), Errc::io_failure, "short write on " + path.string());
}

// PNM headers may carry '#' comment lines between tokens.
std::string next_pnm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) break;
  }
  while (c != EOF && !std::isspace(c)) {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  return tok;
}

int pnm_int(std::istream& in, const std::string& name) {
  const std::string tok = next_pnm_token(in);
  try {
    return std::stoi(tok);
  } catch (const std::exception&) {
    fail(Errc::format_violation, name + ": bad header token '" + tok + "'");
  }
}

Frame read_pnm(std::istream& in, const std::string& name) {
  const std::string magic = next_pnm_token(in);
  require(magic == "P5" || magic == "P6", Errc::format_violation, name + ": bad pixmap header");
  const int ch = magic == "P6" ? 3 : 1;
  const int cols = pnm_int(in, name);
  const int rows = pnm_int(in, name);
  const int maxv = pnm_int(in, name);
  require(cols > 0 && rows > 0, Errc::format_violation, name + ": bad dimensions");
  require(maxv == 255 || maxv == 65535, Errc::format_violation,
          name + ": unsupported maxval " + std::to_string(maxv));
  // header ends with exactly one whitespace byte, already consumed by the tokenizer
  Frame f;
  f.bit_depth = maxv == 255 ? BitDepth::u8 : BitDepth::u16;
  f.planes.assign(ch, ImagePlane(rows, cols));
  std::vector<unsigned char> row(static_cast<std::size_t>(cols) * ch * (maxv > 255 ? 2 : 1));
  for (int r = 0; r < rows; ++r) {
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size()));
    require(in.good(), Errc::format_violation, name + ": truncated raster");
    std::size_t at = 0;
    for (int c = 0; c < cols; ++c)
      for (int k = 0; k < ch; ++k) {
        int v = row[at++];
        if (maxv > 255) v = (v << 8) | row[at++];
        f.planes[k](r, c) = static_cast<double>(v) / maxv;
      }
  }
  return f;
}

/* ---- manifest.json ---- */

json manifest_to_json(const StreamManifest& m) {
  json j;
  j["version"] = m.version;
  j["role"] = stream_role_name(m.role);
  j["frame_count"] = m.frame_count;
  j["width"] = m.width;
  j["height"] = m.height;
  j["bit_depth"] = bit_depth_name(m.bit_depth);
  j["pair_id"] = m.pair_id;
  if (m.kernel_width_hint) j["kernel_width_hint"] = *m.kernel_width_hint;
  if (m.seed) j["seed"] = *m.seed;
  return j;
}

StreamManifest manifest_from_json(const json& j, const std::string& name) {
  try {
    StreamManifest m;
    m.version = j.at("version").get<int>();
    require(m.version == 1, Errc::corrupt_manifest,
            name + ": unsupported version " + std::to_string(m.version));
    m.role = stream_role_from_name(j.at("role").get<std::string>());
    m.frame_count = j.at("frame_count").get<int>();
    m.width = j.at("width").get<int>();
    m.height = j.at("height").get<int>();
    m.bit_depth = bit_depth_from_name(j.at("bit_depth").get<std::string>());
    m.pair_id = j.at("pair_id").get<std::string>();
    if (j.contains("kernel_width_hint")) m.kernel_width_hint = j.at("kernel_width_hint").get<int>();
    if (j.contains("seed")) m.seed = j.at("seed").get<std::uint64_t>();
    require(m.frame_count >= 0 && m.width > 0 && m.height > 0, Errc::corrupt_manifest,
            name + ": bad geometry");
    return m;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(Errc::corrupt_manifest, name + ": " + e.what());
  }
}

StreamManifest read_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::io_failure, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(Errc::corrupt_manifest, path.string() + ": " + e.what());
  }
  return manifest_from_json(j, path.string());
}

}  // namespace

const char* stream_role_name(StreamRole r) {
  switch (r) {
    case StreamRole::Latent: return "latent";
    case StreamRole::Public: return "public";
    case StreamRole::Private: return "private";
  }
  fail(Errc::invalid_argument, "bad stream role");
}

StreamRole stream_role_from_name(const std::string& s) {
  if (s == "latent") return StreamRole::Latent;
  if (s == "public") return StreamRole::Public;
  if (s == "private") return StreamRole::Private;
  fail(Errc::corrupt_manifest, "unknown stream role '" + s + "'");
}

void write_stream(const std::vector<Frame>& frames, const StreamManifest& manifest,
                  const fs::path& dir) {
  require(manifest.frame_count == static_cast<int>(frames.size()), Errc::invalid_argument,
          "manifest frame_count disagrees with frame list");
  require(manifest.frame_count > 0, Errc::invalid_argument, "empty stream");
  const int ch = frames.front().channels();
  for (const Frame& f : frames) {
    validate_frame(f);
    require(f.rows() == manifest.height && f.cols() == manifest.width, Errc::invalid_argument,
            "frame dimensions disagree with manifest");
    require(f.channels() == ch, Errc::invalid_argument, "mixed channel counts in stream");
    require(f.bit_depth == manifest.bit_depth, Errc::invalid_argument,
            "frame bit depth disagrees with manifest");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, Errc::io_failure, "cannot create " + dir.string() + ": " + ec.message());

  const char* ext = frame_ext(manifest.bit_depth, ch);
  for (int i = 0; i < manifest.frame_count; ++i) {
    const fs::path path = dir / frame_name(i, ext);
    if (manifest.bit_depth == BitDepth::f32)
      write_pfm(frames[static_cast<std::size_t>(i)], path);
    else
      write_pnm(frames[static_cast<std::size_t>(i)], path);
  }
  const fs::path mpath = dir / "manifest.json";
  std::ofstream out(mpath, std::ios::binary);
  require(out.good(), Errc::io_failure, "cannot open " + mpath.string());
  out << manifest_to_json(manifest).dump(2) << "\n";
  require(out.good(), Errc::io_failure, "short write on " + mpath.string());
}

std::pair<std::vector<Frame>, StreamManifest> read_stream(const fs::path& dir) {
  const StreamManifest manifest = read_manifest(dir);
  std::vector<Frame> frames;
  frames.reserve(static_cast<std::size_t>(manifest.frame_count));
  int ch = 0;
  for (int i = 0; i < manifest.frame_count; ++i) {
    fs::path path;
    if (manifest.bit_depth == BitDepth::f32) {
      path = dir / frame_name(i, "pfm");
    } else {
      path = dir / frame_name(i, "pgm");
      if (!fs::exists(path)) path = dir / frame_name(i, "ppm");
    }
    require(fs::exists(path), Errc::missing_frame, "missing " + (dir / frame_name(i, "*")).string());
    std::ifstream in(path, std::ios::binary);
    require(in.good(), Errc::io_failure, "cannot open " + path.string());
    Frame f = manifest.bit_depth == BitDepth::f32 ? read_pfm(in, path.string())
                                                  : read_pnm(in, path.string());
    require(f.rows() == manifest.height && f.cols() == manifest.width, Errc::format_violation,
            path.string() + ": dimensions disagree with manifest");
    if (manifest.bit_depth != BitDepth::f32)
      require(f.bit_depth == manifest.bit_depth, Errc::format_violation,
              path.string() + ": sample depth disagrees with manifest");
    f.bit_depth = manifest.bit_depth;
    f.index = i;
    if (i == 0)
      ch = f.channels();
    else
      require(f.channels() == ch, Errc::format_violation,
              path.string() + ": mixed channel counts in stream");
    frames.push_back(std::move(f));
  }
  return {std::move(frames), manifest};
}

std::vector<BlurredPair> pair_streams(const fs::path& public_dir, const fs::path& private_dir) {
  auto [pub_frames, pub_m] = read_stream(public_dir);
  auto [prv_frames, prv_m] = read_stream(private_dir);
  // Either order is a valid pairing: the caller's directory choice decides
  // which stream plays the public role during decoding.
  const bool forward =
      pub_m.role == StreamRole::Public && prv_m.role == StreamRole::Private;
  const bool reversed =
      pub_m.role == StreamRole::Private && prv_m.role == StreamRole::Public;
  require(forward || reversed, Errc::pair_mismatch,
          "streams do not form a public/private pair");
  require(!pub_m.pair_id.empty() && pub_m.pair_id == prv_m.pair_id, Errc::pair_mismatch,
          "pair id mismatch: '" + pub_m.pair_id + "' vs '" + prv_m.pair_id + "'");
  require(pub_m.frame_count == prv_m.frame_count, Errc::pair_mismatch, "frame count mismatch");
  require(pub_m.width == prv_m.width && pub_m.height == prv_m.height, Errc::pair_mismatch,
          "frame geometry mismatch");
  require(pub_m.bit_depth == prv_m.bit_depth, Errc::pair_mismatch, "bit depth mismatch");

  std::optional<int> hint;
  if (pub_m.kernel_width_hint && prv_m.kernel_width_hint &&
      *pub_m.kernel_width_hint == *prv_m.kernel_width_hint)
    hint = pub_m.kernel_width_hint;

  std::vector<BlurredPair> pairs;
  pairs.reserve(pub_frames.size());
  for (std::size_t i = 0; i < pub_frames.size(); ++i) {
    require(pub_frames[i].channels() == prv_frames[i].channels(), Errc::pair_mismatch,
            "channel count mismatch");
    BlurredPair p;
    p.public_frame = std::move(pub_frames[i]);
    p.private_frame = std::move(prv_frames[i]);
    p.kernel_width_hint = hint;
    p.pair_id = pub_m.pair_id;
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace cbp
