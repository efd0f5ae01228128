#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cbp/decoder.hpp"

namespace cbp {

struct BenchConfig {
  int width = 640;   // latent columns
  int height = 480;  // latent rows
  std::vector<int> kernel_widths = {9, 17, 23};
  int reps = 3;
  std::uint64_t seed = 1;
  // Width-search singularity threshold. Tighter than the decoder default:
  // at 640x480 the non-singular Bezout blocks can dip near 1e-6 while truly
  // singular ones sit at machine zero, so 1e-9 separates them reliably.
  double tau = 1e-9;
};

struct BenchRow {
  int kernel_width = 0;
  StageTimings timings;  // averaged over reps, after one untimed warmup
};

struct BenchReport {
  BenchConfig config;
  std::vector<BenchRow> rows;
};

BenchReport run_bench(const BenchConfig& config);

std::string bench_csv(const BenchReport& report);

}  // namespace cbp
