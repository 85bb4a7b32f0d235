// Copyright 2026 The mmprep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mmprep/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"

#include "mmprep/layout.hpp"

namespace mmprep {
namespace {

using json = nlohmann::json;

RecordManifest record_from_json(const json& doc) {
  RecordManifest record;
  record.id = doc.at("id").get<std::string>();
  record.category = doc.value("category", std::string());
  for (const auto& img : doc.at("images")) {
    const int w = img.at(0).get<int>();
    const int h = img.at(1).get<int>();
    if (w < 1 || h < 1) {
      throw ToolkitError(ErrorCode::schema_error,
                         "image dimensions must be positive");
    }
    record.images.emplace_back(w, h);
  }
  if (record.images.empty()) {
    throw ToolkitError(ErrorCode::schema_error, "record has no images");
  }
  if (doc.contains("boxes")) {
    for (const auto& b : doc.at("boxes")) {
      ManifestBox box;
      box.image_index = b.at("image").get<int>();
      if (box.image_index < 0 ||
          box.image_index >= static_cast<int>(record.images.size())) {
        throw ToolkitError(ErrorCode::schema_error, "box image out of range");
      }
      box.box = parse_box(b.at("box").get<std::string>());
      record.boxes.push_back(box);
    }
  }
  return record;
}

json record_to_json(const RecordManifest& record) {
  json doc;
  doc["id"] = record.id;
  doc["images"] = json::array();
  for (const auto& [w, h] : record.images) {
    doc["images"].push_back(json::array({w, h}));
  }
  if (!record.category.empty()) doc["category"] = record.category;
  if (!record.boxes.empty()) {
    doc["boxes"] = json::array();
    for (const auto& box : record.boxes) {
      doc["boxes"].push_back(
          {{"image", box.image_index}, {"box", encode_box(box.box)}});
    }
  }
  return doc;
}

std::string grid_key(const GridSpec& grid) {
  return std::to_string(grid.n_h) + "x" + std::to_string(grid.n_w);
}

void accumulate_record(StatsReport& report, const RecordManifest& record,
                       const StatsConfig& config) {
  const SplitConfig& cfg = config.split;
  const bool split =
      multi_image_policy(static_cast<int>(record.images.size()), cfg);
  report.record_count += 1;
  for (const auto& [w, h] : record.images) {
    TilePlan plan;
    if (!split) {
      plan = single_tile_plan(h, w, cfg);
    } else if (config.dynamic) {
      plan = select_grid(h, w, cfg);
    } else {
      plan = fixed_grid_plan(h, w, config.static_grid, cfg);
    }
    report.image_count += 1;
    report.total_subimages += plan.total_subimages;
    report.total_image_tokens +=
        static_cast<std::int64_t>(plan.total_subimages) * cfg.tokens_per_tile;
    report.grid_histogram[grid_key(plan.grid)] += 1;
    if (plan.branch == Branch::cover) {
      report.cover_count += 1;
    } else {
      report.downscale_count += 1;
    }
  }
}

void merge_into(StatsReport& into, const StatsReport& from) {
  into.record_count += from.record_count;
  into.image_count += from.image_count;
  into.total_subimages += from.total_subimages;
  into.total_image_tokens += from.total_image_tokens;
  into.cover_count += from.cover_count;
  into.downscale_count += from.downscale_count;
  for (const auto& [key, count] : from.grid_histogram) {
    into.grid_histogram[key] += count;
  }
}

int parse_int(std::string_view text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ToolkitError(ErrorCode::parse_error,
                       "expected integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

ManifestReadResult read_manifest(std::istream& in, bool strict) {
  ManifestReadResult result;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json doc = json::parse(line);
      if (first && doc.is_object() && doc.contains("schema")) {
        const auto schema = doc.at("schema").get<std::string>();
        if (schema != kManifestSchema) {
          throw ToolkitError(ErrorCode::schema_error,
                             "unsupported manifest schema: " + schema);
        }
        first = false;
        continue;
      }
      first = false;
      result.records.push_back(record_from_json(doc));
    } catch (const std::exception& e) {
      if (strict) {
        throw ToolkitError(ErrorCode::schema_error,
                           "line " + std::to_string(line_no) + ": " +
                               e.what());
      }
      result.diagnostics.push_back({line_no, e.what()});
    }
  }
  if (in.bad()) {
    throw ToolkitError(ErrorCode::io_error, "manifest read failed");
  }
  return result;
}

void write_manifest(std::ostream& out,
                    std::span<const RecordManifest> records) {
  out << json{{"schema", kManifestSchema}}.dump() << "\n";
  for (const auto& record : records) {
    out << record_to_json(record).dump() << "\n";
  }
  if (!out) {
    throw ToolkitError(ErrorCode::io_error, "manifest write failed");
  }
}

SynthSpec synth_preset(std::string_view name) {
  // Desk-scale stand-ins; long edges log-uniform within each cluster.
  if (name == "web-mix") {
    return SynthSpec{{
        {0.62, 200, 800, 1.0, 1.3},     // thumbnails and small photos
        {0.26, 800, 1300, 1.0, 1.3},    // typical web photos
        {0.08, 1300, 2600, 1.0, 1.6},   // large photos
        {0.04, 2600, 4200, 1.0, 2.0},   // full-resolution uploads
    }};
  }
  if (name == "doc-pages") {
    return SynthSpec{{
        {0.8, 1000, 2600, 1.3, 1.5},    // portrait pages
        {0.2, 2600, 4000, 1.3, 1.6},    // dense scans
    }};
  }
  if (name == "screenshots") {
    return SynthSpec{{
        {0.6, 1280, 2000, 1.6, 1.8},    // laptop screens
        {0.4, 2000, 3840, 1.7, 2.4},    // external monitors
    }};
  }
  throw ToolkitError(ErrorCode::invalid_distribution,
                     "unknown synth preset: " + std::string(name));
}

std::vector<RecordManifest> synth_corpus(const SynthSpec& spec,
                                         std::size_t count,
                                         std::uint64_t seed) {
  if (spec.clusters.empty()) {
    throw ToolkitError(ErrorCode::invalid_distribution, "no clusters");
  }
  double total_weight = 0.0;
  for (const auto& cluster : spec.clusters) {
    if (cluster.weight < 0.0 || cluster.min_edge < 1 ||
        cluster.max_edge < cluster.min_edge || cluster.min_aspect < 1.0 ||
        cluster.max_aspect < cluster.min_aspect) {
      throw ToolkitError(ErrorCode::invalid_distribution,
                         "invalid resolution cluster");
    }
    total_weight += cluster.weight;
  }
  if (total_weight <= 0.0) {
    throw ToolkitError(ErrorCode::invalid_distribution, "zero total weight");
  }

  std::vector<RecordManifest> records;
  records.reserve(count);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    double pick = unit(rng) * total_weight;
    const ResolutionCluster* cluster = &spec.clusters.back();
    for (const auto& c : spec.clusters) {
      pick -= c.weight;
      if (pick <= 0.0) {
        cluster = &c;
        break;
      }
    }
    const double long_edge =
        std::exp(std::log(static_cast<double>(cluster->min_edge)) +
                 unit(rng) * (std::log(static_cast<double>(cluster->max_edge)) -
                              std::log(static_cast<double>(cluster->min_edge))));
    const double aspect =
        std::exp(std::log(cluster->min_aspect) +
                 unit(rng) * (std::log(cluster->max_aspect) -
                              std::log(cluster->min_aspect)));
    const bool landscape = unit(rng) < 0.5;
    int long_px = std::max(1, static_cast<int>(std::lround(long_edge)));
    int short_px = std::max(1, static_cast<int>(std::lround(long_edge / aspect)));
    RecordManifest record;
    record.id = "synth-" + std::to_string(i);
    record.category = "synthetic";
    if (landscape) {
      record.images.emplace_back(long_px, short_px);
    } else {
      record.images.emplace_back(short_px, long_px);
    }
    records.push_back(std::move(record));
  }
  return records;
}

StatsConfig parse_stats_config(std::string_view text,
                               const SplitConfig& base) {
  StatsConfig config;
  config.name = std::string(text);
  config.split = base;
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ToolkitError(ErrorCode::parse_error,
                       "expected 'dynamic:MIN:MAX' or 'static:HxW'");
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view rest = text.substr(colon + 1);
  if (kind == "dynamic") {
    const auto sep = rest.find(':');
    if (sep == std::string_view::npos) {
      throw ToolkitError(ErrorCode::parse_error,
                         "dynamic config needs MIN:MAX");
    }
    config.dynamic = true;
    config.split.n_min = parse_int(rest.substr(0, sep));
    config.split.n_max = parse_int(rest.substr(sep + 1));
    config.split.validate();
  } else if (kind == "static") {
    const auto sep = rest.find('x');
    if (sep == std::string_view::npos) {
      throw ToolkitError(ErrorCode::parse_error, "static config needs HxW");
    }
    config.dynamic = false;
    config.static_grid.n_h = parse_int(rest.substr(0, sep));
    config.static_grid.n_w = parse_int(rest.substr(sep + 1));
    if (config.static_grid.n_h < 1 || config.static_grid.n_w < 1) {
      throw ToolkitError(ErrorCode::invalid_range, "grid sides must be >= 1");
    }
  } else {
    throw ToolkitError(ErrorCode::parse_error,
                       "unknown stats config kind: " + std::string(kind));
  }
  return config;
}

StatsReport corpus_stats_serial(std::span<const RecordManifest> records,
                                const StatsConfig& config) {
  config.split.validate();
  StatsReport report;
  report.config_name = config.name;
  for (const auto& record : records) {
    try {
      accumulate_record(report, record, config);
    } catch (const ToolkitError& e) {
      throw ToolkitError(e.code(),
                         "record '" + record.id + "': " + e.what());
    }
  }
  return report;
}

StatsReport corpus_stats(std::span<const RecordManifest> records,
                         const StatsConfig& config, int shards) {
  config.split.validate();
  if (shards <= 0) {
#ifdef _OPENMP
    shards = omp_get_max_threads();
#else
    shards = 1;
#endif
  }
  const std::size_t n = records.size();
  shards = std::max(1, std::min<int>(shards, static_cast<int>(std::max<std::size_t>(n, 1))));

  std::vector<StatsReport> partial(static_cast<std::size_t>(shards));
  std::vector<std::string> shard_errors(static_cast<std::size_t>(shards));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int s = 0; s < shards; ++s) {
    const std::size_t begin = n * static_cast<std::size_t>(s) /
                              static_cast<std::size_t>(shards);
    const std::size_t end = n * static_cast<std::size_t>(s + 1) /
                            static_cast<std::size_t>(shards);
    for (std::size_t i = begin; i < end; ++i) {
      try {
        accumulate_record(partial[static_cast<std::size_t>(s)], records[i],
                          config);
      } catch (const std::exception& e) {
        shard_errors[static_cast<std::size_t>(s)] =
            "record '" + records[i].id + "': " + e.what();
        break;
      }
    }
  }
  for (const auto& err : shard_errors) {
    if (!err.empty()) {
      throw ToolkitError(ErrorCode::invalid_dimensions, err);
    }
  }

  StatsReport report;
  report.config_name = config.name;
  for (const auto& part : partial) {
    merge_into(report, part);
  }
  return report;
}

}  // namespace mmprep
