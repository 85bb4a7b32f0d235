// Copyright 2026 The mmprep Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmprep/coords.hpp"
#include "mmprep/tiler.hpp"

namespace mmprep {

inline constexpr std::string_view kManifestSchema = "mmprep/manifest-v1";

struct ManifestBox {
  int image_index = 0;
  NormBox box;
};

struct RecordManifest {
  std::string id;
  std::vector<std::pair<int, int>> images;  // (width, height)
  std::string category;
  std::vector<ManifestBox> boxes;
};

struct ParseDiagnostic {
  std::size_t line = 0;
  std::string message;
};

struct ManifestReadResult {
  std::vector<RecordManifest> records;
  std::vector<ParseDiagnostic> diagnostics;
};

// Streaming line-delimited JSON parse. An optional schema header line is
// validated when present. Malformed lines become diagnostics unless strict,
// in which case the first one throws.
ManifestReadResult read_manifest(std::istream& in, bool strict = false);

void write_manifest(std::ostream& out,
                    std::span<const RecordManifest> records);

struct ResolutionCluster {
  double weight = 0.0;
  int min_edge = 0;
  int max_edge = 0;      // long edge, log-uniform
  double min_aspect = 1.0;
  double max_aspect = 1.0;  // long/short edge, log-uniform
};

struct SynthSpec {
  std::vector<ResolutionCluster> clusters;
};

// Presets: "web-mix", "doc-pages", "screenshots".
SynthSpec synth_preset(std::string_view name);

std::vector<RecordManifest> synth_corpus(const SynthSpec& spec,
                                         std::size_t count,
                                         std::uint64_t seed);

struct StatsConfig {
  std::string name;
  bool dynamic = true;
  GridSpec static_grid{2, 2};
  SplitConfig split;
};

// "dynamic:MIN:MAX" or "static:HxW", e.g. "dynamic:4:9", "static:2x2".
StatsConfig parse_stats_config(std::string_view text,
                               const SplitConfig& base);

struct StatsReport {
  std::string config_name;
  std::int64_t record_count = 0;
  std::int64_t image_count = 0;
  std::int64_t total_subimages = 0;
  std::int64_t total_image_tokens = 0;
  std::map<std::string, std::int64_t> grid_histogram;  // "3x3" -> count
  std::int64_t cover_count = 0;
  std::int64_t downscale_count = 0;
};

// Serial reference implementation.
StatsReport corpus_stats_serial(std::span<const RecordManifest> records,
                                const StatsConfig& config);

// Sharded OpenMP implementation; bit-identical to the serial one for any
// shard count. shards <= 0 picks one shard per available thread.
StatsReport corpus_stats(std::span<const RecordManifest> records,
                         const StatsConfig& config, int shards = 0);

}  // namespace mmprep
