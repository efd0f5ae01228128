#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "cbp/bench.hpp"
#include "cbp/decoder.hpp"
#include "cbp/encoder.hpp"
#include "cbp/error.hpp"
#include "cbp/metrics.hpp"
#include "cbp/stream_io.hpp"
#include "cbp/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int exit_code_for(cbp::Errc code) {
  switch (code) {
    case cbp::Errc::invalid_argument:
      return 1;
    case cbp::Errc::coprimality_failure:
      return 2;
    case cbp::Errc::io_failure:
    case cbp::Errc::corrupt_manifest:
    case cbp::Errc::missing_frame:
    case cbp::Errc::format_violation:
      return 3;
    case cbp::Errc::pair_mismatch:
      return 5;
    default:
      return 4;  // pipeline failure, message names the stage
  }
}

template <typename F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const cbp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}

std::string frame_stem(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06d", index);
  return buf;
}

struct EncodeOpts {
  std::string input, out_public, out_private;
  int kernel_width = 9;
  std::uint64_t seed = 1;
  std::string bit_depth = "float32";
};

int run_encode(const EncodeOpts& o) {
  const cbp::BitDepth depth = cbp::bit_depth_from_name(o.bit_depth);
  auto [frames, in_manifest] = cbp::read_stream(o.input);
  cbp::require(!frames.empty(), cbp::Errc::invalid_argument, "input stream has no frames");

  // A fresh kernel pair per frame; the stream seed only feeds the per-frame seeds.
  std::vector<cbp::Frame> pub, prv;
  std::string pair_id;
  std::optional<int> hint;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const cbp::CoprimePair pair =
        cbp::generate_coprime_pair(o.kernel_width, cbp::frame_seed(o.seed, int(i)));
    cbp::BlurredPair bp = cbp::encode_frame(frames[i], pair);
    if (depth != cbp::BitDepth::f32) {
      bp.public_frame = cbp::quantize_frame(bp.public_frame, depth);
      bp.private_frame = cbp::quantize_frame(bp.private_frame, depth);
    }
    if (i == 0) {
      pair_id = bp.pair_id;
      hint = bp.kernel_width_hint;
    }
    std::cout << frame_stem(int(i)) << ": coprimality margin " << pair.coprimality_margin << "\n";
    pub.push_back(std::move(bp.public_frame));
    prv.push_back(std::move(bp.private_frame));
  }

  cbp::StreamManifest m;
  m.frame_count = static_cast<int>(pub.size());
  m.width = pub.front().cols();
  m.height = pub.front().rows();
  m.bit_depth = depth;
  m.pair_id = pair_id;
  m.kernel_width_hint = hint;
  m.role = cbp::StreamRole::Public;
  cbp::write_stream(pub, m, o.out_public);
  m.role = cbp::StreamRole::Private;
  m.seed = o.seed;  // the generating seed travels with the private stream only
  cbp::write_stream(prv, m, o.out_private);

  std::cout << "encoded " << m.frame_count << " frame(s), pair " << pair_id << ", kernel width "
            << o.kernel_width << "\n";
  return 0;
}

struct DecodeOpts {
  std::string pub, prv, out;
  double tau = 1e-6;
  double epsilon = 0.0;
  bool has_epsilon = false;
  bool trust_hint = false;
  double max_residual = 1e-2;
  int width_min = 9;
  int width_max = 25;
  int workers = 0;  // 0 = one per core
};

int run_decode(const DecodeOpts& o) {
  std::vector<cbp::BlurredPair> pairs = cbp::pair_streams(o.pub, o.prv);
  cbp::require(!pairs.empty(), cbp::Errc::invalid_argument, "streams have no frames");

  cbp::DecodeConfig cfg;
  cfg.tau = o.tau;
  if (o.has_epsilon) cfg.epsilon = o.epsilon;
  cfg.trust_hint = o.trust_hint;
  cfg.search_min = o.width_min;
  cfg.search_max = o.width_max;

  const std::size_t n = pairs.size();
  std::vector<cbp::DecodedFrame> decoded(n);
  std::vector<std::exception_ptr> errors(n);
  int workers = o.workers > 0 ? o.workers : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, static_cast<int>(n));

  std::atomic<std::size_t> cursor{0};
  auto work = [&] {
    for (std::size_t i; (i = cursor.fetch_add(1)) < n;) {
      try {
        decoded[i] = cbp::decode_frame(pairs[i], cfg);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<cbp::Frame> latents;
  latents.reserve(n);
  for (cbp::DecodedFrame& d : decoded) latents.push_back(std::move(d.latent));
  cbp::StreamManifest m;
  m.role = cbp::StreamRole::Latent;
  m.frame_count = static_cast<int>(n);
  m.width = latents.front().cols();
  m.height = latents.front().rows();
  m.bit_depth = cbp::BitDepth::f32;
  m.pair_id = pairs.front().pair_id;
  cbp::write_stream(latents, m, o.out);

  bool within_bound = true;
  for (std::size_t i = 0; i < n; ++i) {
    const cbp::DecodedFrame& d = decoded[i];
    json j;
    j["width_used"] = d.width_used;
    j["width_clamped"] = d.width_clamped;
    j["validation_residual"] = d.validation_residual;
    j["stage_timings"] = {
        {"polynomial_evaluation_ms", d.stage_timings.polynomial_evaluation_ms},
        {"kernel_degree_estimation_ms", d.stage_timings.kernel_degree_estimation_ms},
        {"kernel_estimation_1d_ms", d.stage_timings.kernel_estimation_1d_ms},
        {"kernel_estimation_2d_fft_ms", d.stage_timings.kernel_estimation_2d_fft_ms},
        {"total_ms", d.stage_timings.total_ms}};
    const fs::path side = fs::path(o.out) / (frame_stem(static_cast<int>(i)) + ".json");
    std::ofstream sf(side, std::ios::binary);
    cbp::require(sf.good(), cbp::Errc::io_failure, "cannot open " + side.string());
    sf << j.dump(2) << "\n";
    cbp::require(sf.good(), cbp::Errc::io_failure, "short write on " + side.string());
    std::cout << frame_stem(static_cast<int>(i)) << ": width " << d.width_used << ", residual "
              << d.validation_residual << "\n";
    if (!(d.validation_residual <= o.max_residual)) within_bound = false;
  }
  if (!within_bound) {
    std::cerr << "error: validation residual above " << o.max_residual << "\n";
    return 4;
  }
  return 0;
}

int run_degrade(const std::string& input, int drop, const std::string& out) {
  auto [frames, manifest] = cbp::read_stream(input);
  for (cbp::Frame& f : frames) f = cbp::degrade_bits(f, drop);
  cbp::write_stream(frames, manifest, out);
  std::cout << "dropped " << drop << " bit(s) on " << frames.size() << " frame(s)\n";
  return 0;
}

int run_psnr(const std::string& ref, const std::string& test) {
  auto [rf, rm] = cbp::read_stream(ref);
  auto [tf, tm] = cbp::read_stream(test);
  cbp::require(rf.size() == tf.size(), cbp::Errc::dim_mismatch, "frame count mismatch");
  cbp::require(!rf.empty(), cbp::Errc::invalid_argument, "streams have no frames");
  double finite_sum = 0.0;
  int finite_count = 0;
  for (std::size_t i = 0; i < rf.size(); ++i) {
    const double v = cbp::psnr(rf[i], tf[i]);
    std::printf("%s %.6f\n", frame_stem(static_cast<int>(i)).c_str(), v);
    if (std::isfinite(v)) {
      finite_sum += v;
      ++finite_count;
    }
  }
  if (finite_count == 0)
    std::printf("mean inf\n");
  else
    std::printf("mean %.6f\n", finite_sum / finite_count);
  return 0;
}

int run_bench_cmd(const cbp::BenchConfig& cfg, const std::string& out) {
  const cbp::BenchReport report = cbp::run_bench(cfg);
  const std::string csv = cbp::bench_csv(report);
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    cbp::require(f.good(), cbp::Errc::io_failure, "cannot open " + out);
    f << csv;
    cbp::require(f.good(), cbp::Errc::io_failure, "short write on " + out);
  }
  std::cout << csv;
  return 0;
}

int run_synth(const std::string& out, int count, int width, int height, int channels,
              std::uint64_t seed) {
  cbp::require(count > 0, cbp::Errc::invalid_argument, "frame count must be positive");
  std::vector<cbp::Frame> frames;
  frames.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    cbp::Frame f = cbp::random_frame(height, width, channels, cbp::frame_seed(seed, i));
    f.index = i;
    frames.push_back(std::move(f));
  }
  cbp::StreamManifest m;
  m.role = cbp::StreamRole::Latent;
  m.frame_count = count;
  m.width = width;
  m.height = height;
  m.bit_depth = cbp::BitDepth::f32;
  m.seed = seed;
  cbp::write_stream(frames, m, out);
  std::cout << "wrote " << count << " noise frame(s) to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coprime blurred-pair video codec"};
  app.require_subcommand(1);

  EncodeOpts enc;
  CLI::App* c_enc = app.add_subcommand("encode", "blur a latent stream into a public/private pair");
  c_enc->add_option("--input", enc.input, "latent stream directory")->required();
  c_enc->add_option("--out-public", enc.out_public, "output directory, public stream")->required();
  c_enc->add_option("--out-private", enc.out_private, "output directory, private stream")
      ->required();
  c_enc->add_option("--kernel-width", enc.kernel_width, "odd blur width in [3,63]")->required();
  c_enc->add_option("--seed", enc.seed, "kernel generator seed");
  c_enc->add_option("--bit-depth", enc.bit_depth, "float32, u16 or u8")
      ->check(CLI::IsMember({"float32", "u16", "u8"}));

  DecodeOpts dec;
  CLI::App* c_dec = app.add_subcommand("decode", "recover the latent stream from a blurred pair");
  c_dec->add_option("--public", dec.pub, "public stream directory")->required();
  c_dec->add_option("--private", dec.prv, "private stream directory")->required();
  c_dec->add_option("--out", dec.out, "output directory, latent stream")->required();
  c_dec->add_option("--tau", dec.tau, "singularity threshold for width search");
  CLI::Option* eps_opt =
      c_dec->add_option("--epsilon", dec.epsilon, "deconvolution regularizer (default adaptive)");
  c_dec->add_flag("--trust-hint", dec.trust_hint, "skip width estimation when a hint is present");
  c_dec->add_option("--max-residual", dec.max_residual,
                    "largest acceptable per-frame validation residual");
  c_dec->add_option("--width-min", dec.width_min, "smallest width tried by the search");
  c_dec->add_option("--width-max", dec.width_max, "largest width tried by the search");
  c_dec->add_option("--workers", dec.workers, "decode threads (default: one per core)");

  std::string deg_in, deg_out;
  int deg_drop = 0;
  CLI::App* c_deg = app.add_subcommand("degrade", "zero low-order bits of a quantized stream");
  c_deg->add_option("--input", deg_in, "stream directory")->required();
  c_deg->add_option("--drop", deg_drop, "low-order bits to zero")->required();
  c_deg->add_option("--out", deg_out, "output directory")->required();

  std::string ps_ref, ps_test;
  CLI::App* c_ps = app.add_subcommand("psnr", "peak signal-to-noise ratio between two streams");
  c_ps->add_option("--ref", ps_ref, "reference stream directory")->required();
  c_ps->add_option("--test", ps_test, "test stream directory")->required();

  cbp::BenchConfig bench;
  std::string bench_out;
  CLI::App* c_bn = app.add_subcommand("bench", "per-stage decode timings, CSV");
  c_bn->add_option("--width", bench.width, "latent columns");
  c_bn->add_option("--height", bench.height, "latent rows");
  c_bn->add_option("--kernel-widths", bench.kernel_widths, "comma-separated odd widths")
      ->delimiter(',');
  c_bn->add_option("--reps", bench.reps, "timed repetitions per width");
  c_bn->add_option("--seed", bench.seed, "content seed");
  c_bn->add_option("--tau", bench.tau, "width-search singularity threshold");
  c_bn->add_option("--out", bench_out, "also write the CSV here");

  std::string sy_out;
  int sy_frames = 1, sy_width = 64, sy_height = 64, sy_channels = 1;
  std::uint64_t sy_seed = 1;
  CLI::App* c_sy = app.add_subcommand("synth", "write a deterministic noise stream for testing");
  c_sy->add_option("--out", sy_out, "output directory")->required();
  c_sy->add_option("--frames", sy_frames, "frame count");
  c_sy->add_option("--width", sy_width, "columns");
  c_sy->add_option("--height", sy_height, "rows");
  c_sy->add_option("--channels", sy_channels, "1 or 3");
  c_sy->add_option("--seed", sy_seed, "content seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  dec.has_epsilon = eps_opt->count() > 0;
  if (*c_enc) return guarded([&] { return run_encode(enc); });
  if (*c_dec) return guarded([&] { return run_decode(dec); });
  if (*c_deg) return guarded([&] { return run_degrade(deg_in, deg_drop, deg_out); });
  if (*c_ps) return guarded([&] { return run_psnr(ps_ref, ps_test); });
  if (*c_bn) return guarded([&] { return run_bench_cmd(bench, bench_out); });
  if (*c_sy)
    return guarded([&] { return run_synth(sy_out, sy_frames, sy_width, sy_height, sy_channels,
                                          sy_seed); });
  return 1;
}
