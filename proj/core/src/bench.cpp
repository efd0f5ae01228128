#include "cbp/bench.hpp"

#include <algorithm>
#include <cstdio>

#include "cbp/encoder.hpp"
#include "cbp/error.hpp"
#include "cbp/synth.hpp"
#include "rng.hpp"

namespace cbp {

BenchReport run_bench(const BenchConfig& config) {
  require(config.width > 0 && config.height > 0, Errc::invalid_argument, "bad bench geometry");
  require(config.reps >= 1, Errc::invalid_argument, "reps must be at least 1");
  require(!config.kernel_widths.empty(), Errc::invalid_argument, "no kernel widths");

  DecodeConfig dcfg;
  dcfg.validate = false;  // stage costs only; residual checks are not part of a row
  dcfg.tau = config.tau;
  const auto [lo, hi] =
      std::minmax_element(config.kernel_widths.begin(), config.kernel_widths.end());
  dcfg.search_min = std::min(dcfg.search_min, *lo);
  dcfg.search_max = std::max(dcfg.search_max, *hi);

  BenchReport report;
  report.config = config;
  for (const int t : config.kernel_widths) {
    const std::uint64_t seed = detail::frame_seed(config.seed, t);
    const CoprimePair pair = generate_coprime_pair(t, seed);
    const Frame latent = random_frame(config.height, config.width, 1, detail::splitmix64(seed));
    const BlurredPair blurred = encode_frame(latent, pair);

    decode_frame(blurred, dcfg);  // warmup: transform plans, allocator, caches
    StageTimings sum{};
    for (int rep = 0; rep < config.reps; ++rep) {
      const StageTimings st = decode_frame(blurred, dcfg).stage_timings;
      sum.polynomial_evaluation_ms += st.polynomial_evaluation_ms;
      sum.kernel_degree_estimation_ms += st.kernel_degree_estimation_ms;
      sum.kernel_estimation_1d_ms += st.kernel_estimation_1d_ms;
      sum.kernel_estimation_2d_fft_ms += st.kernel_estimation_2d_fft_ms;
      sum.total_ms += st.total_ms;
    }
    const double n = config.reps;
    BenchRow row;
    row.kernel_width = t;
    row.timings = {sum.polynomial_evaluation_ms / n, sum.kernel_degree_estimation_ms / n,
                   sum.kernel_estimation_1d_ms / n, sum.kernel_estimation_2d_fft_ms / n,
                   sum.total_ms / n};
    report.rows.push_back(row);
  }
  return report;
}

std::string bench_csv(const BenchReport& report) {
  std::string out =
      "kernel_width,polynomial_evaluation_ms,kernel_degree_estimation_ms,"
      "kernel_estimation_1d_ms,kernel_estimation_2d_fft_ms,total_ms\n";
  for (const BenchRow& row : report.rows) {
    char line[256];
    std::snprintf(line, sizeof(line), "%d,%.3f,%.3f,%.3f,%.3f,%.3f\n", row.kernel_width,
                  row.timings.polynomial_evaluation_ms, row.timings.kernel_degree_estimation_ms,
                  row.timings.kernel_estimation_1d_ms, row.timings.kernel_estimation_2d_fft_ms,
                  row.timings.total_ms);
    out += line;
  }
  return out;
}

}  // namespace cbp
