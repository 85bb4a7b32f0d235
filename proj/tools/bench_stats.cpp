// Copyright 2026 The mmprep Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Throughput comparison of the serial and OpenMP corpus-stats paths on a
// synthetic corpus, with an equality check between the two.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include <functional>

#include "mmprep/corpus.hpp"

using namespace mmprep;

namespace {

double time_ms(const std::function<StatsReport()>& fn, StatsReport& out) {
  const auto start = std::chrono::steady_clock::now();
  out = fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

bool same(const StatsReport& a, const StatsReport& b) {
  return a.record_count == b.record_count &&
         a.total_subimages == b.total_subimages &&
         a.total_image_tokens == b.total_image_tokens &&
         a.cover_count == b.cover_count &&
         a.downscale_count == b.downscale_count &&
         a.grid_histogram == b.grid_histogram;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t count = 200000;
  if (argc > 1) count = std::strtoull(argv[1], nullptr, 10);

  const auto records = synth_corpus(synth_preset("web-mix"), count, 42);
  SplitConfig base;
  const StatsConfig config = parse_stats_config("dynamic:4:9", base);

  StatsReport serial, parallel;
  const double t_serial =
      time_ms([&] { return corpus_stats_serial(records, config); }, serial);
  const double t_parallel =
      time_ms([&] { return corpus_stats(records, config); }, parallel);

  std::printf("records          %zu\n", count);
  std::printf("serial           %8.1f ms  (%.0f rec/s)\n", t_serial,
              count / t_serial * 1e3);
  std::printf("openmp           %8.1f ms  (%.0f rec/s)\n", t_parallel,
              count / t_parallel * 1e3);
  std::printf("speedup          %8.2fx\n", t_serial / t_parallel);
  std::printf("subimages        %lld\n",
              static_cast<long long>(serial.total_subimages));
  if (!same(serial, parallel)) {
    std::fprintf(stderr, "MISMATCH between serial and parallel reports\n");
    return 1;
  }
  std::printf("reports match\n");
  return 0;
}
