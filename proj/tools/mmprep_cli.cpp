// Copyright 2026 The mmprep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "mmprep/corpus.hpp"
#include "mmprep/layout.hpp"
#include "mmprep/mixture.hpp"
#include "mmprep/scoring.hpp"

namespace {

using json = nlohmann::json;
using namespace mmprep;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MMPREP_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

struct SplitFlags {
  int r = 672;
  std::string grid = "4:9";
  int tokens = 144;
  std::string indicator = "none";
  std::string overview = "after";
  int threshold = 3;

  SplitConfig to_config() const {
    SplitConfig cfg;
    cfg.encoder_edge = r;
    const auto sep = grid.find(':');
    if (sep == std::string::npos) {
      throw ToolkitError(ErrorCode::parse_error, "--grid expects MIN:MAX");
    }
    cfg.n_min = std::stoi(grid.substr(0, sep));
    cfg.n_max = std::stoi(grid.substr(sep + 1));
    cfg.tokens_per_tile = tokens;
    if (indicator == "none") cfg.indicator_mode = IndicatorMode::none;
    else if (indicator == "index") cfg.indicator_mode = IndicatorMode::index;
    else if (indicator == "seps") cfg.indicator_mode = IndicatorMode::seps;
    else throw ToolkitError(ErrorCode::parse_error, "--indicator: none|index|seps");
    if (overview == "before") cfg.overview_position = OverviewPosition::before;
    else if (overview == "after") cfg.overview_position = OverviewPosition::after;
    else throw ToolkitError(ErrorCode::parse_error, "--overview: before|after");
    cfg.multi_image_split_threshold = threshold;
    cfg.validate();
    return cfg;
  }
};

void add_split_flags(CLI::App* cmd, SplitFlags& flags) {
  cmd->add_option("--r", flags.r, "encoder tile edge in pixels");
  cmd->add_option("--grid", flags.grid, "grid range MIN:MAX");
  cmd->add_option("--tokens", flags.tokens, "tokens per sub-image");
  cmd->add_option("--indicator", flags.indicator,
                  "position indicator mode: none|index|seps");
  cmd->add_option("--overview", flags.overview,
                  "overview position: before|after");
  cmd->add_option("--threshold", flags.threshold,
                  "disable splitting at this many images per record");
}

std::vector<RecordManifest> load_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ToolkitError(ErrorCode::io_error, "cannot open " + path);
  }
  auto result = read_manifest(in);
  for (const auto& diag : result.diagnostics) {
    std::cerr << path << ":" << diag.line << ": " << diag.message << "\n";
  }
  return std::move(result.records);
}

json plan_to_json(const std::string& id, int image_index, const TilePlan& plan,
                  const SplitConfig& cfg, bool with_tiles) {
  const TokenLayout layout = assemble({plan}, cfg);
  const TokenBudget budget = token_budget(layout);
  json doc;
  if (!id.empty()) doc["id"] = id;
  doc["image"] = image_index;
  doc["source"] = {plan.source_h, plan.source_w};
  doc["grid"] = {plan.grid.n_h, plan.grid.n_w};
  doc["branch"] = plan.branch == Branch::cover ? "cover" : "downscale";
  doc["scale"] = plan.resize.scale();
  doc["resized"] = {plan.resize.resized_h, plan.resize.resized_w};
  doc["pad"] = {plan.resize.pad_bottom, plan.resize.pad_right};
  doc["overview"] = plan.include_overview;
  doc["subimages"] = plan.total_subimages;
  doc["effective_mp"] = effective_resolution_mp(plan, cfg);
  doc["tokens"] = {{"image", budget.image_tokens},
                   {"indicator", budget.indicator_tokens},
                   {"total", budget.total}};
  if (with_tiles) {
    doc["tiles"] = json::array();
    for (const auto& tile : plan.tiles) {
      doc["tiles"].push_back({tile.x, tile.y, tile.w, tile.h});
    }
  }
  return doc;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) {
    throw ToolkitError(ErrorCode::io_error, "cannot open " + path);
  }
  return file;
}

int run_tile(const SplitFlags& flags, int h, int w,
             const std::string& manifest_path, const std::string& out_path,
             bool with_tiles) {
  const SplitConfig cfg = flags.to_config();
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  if (manifest_path.empty()) {
    if (h == 0 && w == 0) {
      throw ToolkitError(ErrorCode::invalid_dimensions,
                         "tile needs --height/--width or --manifest");
    }
    const TilePlan plan = select_grid(h, w, cfg);
    out << plan_to_json("", 0, plan, cfg, with_tiles).dump() << "\n";
    return 0;
  }
  const auto records = load_records(manifest_path);
  for (const auto& record : records) {
    const bool split =
        multi_image_policy(static_cast<int>(record.images.size()), cfg);
    for (std::size_t i = 0; i < record.images.size(); ++i) {
      const auto [iw, ih] = record.images[i];
      const TilePlan plan =
          split ? select_grid(ih, iw, cfg) : single_tile_plan(ih, iw, cfg);
      out << plan_to_json(record.id, static_cast<int>(i), plan, cfg,
                          with_tiles)
                 .dump()
          << "\n";
    }
  }
  return 0;
}

json stats_to_json(const StatsReport& report) {
  json doc;
  doc["config"] = report.config_name;
  doc["records"] = report.record_count;
  doc["images"] = report.image_count;
  doc["subimages"] = report.total_subimages;
  doc["image_tokens"] = report.total_image_tokens;
  doc["cover"] = report.cover_count;
  doc["downscale"] = report.downscale_count;
  doc["grids"] = json::object();
  for (const auto& [key, count] : report.grid_histogram) {
    doc["grids"][key] = count;
  }
  return doc;
}

int run_stats(const SplitFlags& flags, const std::string& manifest_path,
              const std::string& synth, std::size_t count, std::uint64_t seed,
              const std::vector<std::string>& config_specs,
              const std::vector<std::string>& compare, int shards,
              const std::string& out_path) {
  const SplitConfig base = flags.to_config();
  std::vector<RecordManifest> records;
  if (!synth.empty()) {
    records = synth_corpus(synth_preset(synth), count, seed);
  } else if (!manifest_path.empty()) {
    records = load_records(manifest_path);
  } else {
    throw ToolkitError(ErrorCode::io_error, "stats needs --manifest or --synth");
  }

  std::vector<StatsConfig> configs;
  if (!compare.empty()) {
    if (compare.size() != 2) {
      throw ToolkitError(ErrorCode::parse_error,
                         "--compare takes exactly two configs");
    }
    for (const auto& spec : compare) {
      configs.push_back(parse_stats_config(spec, base));
    }
  } else if (!config_specs.empty()) {
    for (const auto& spec : config_specs) {
      configs.push_back(parse_stats_config(spec, base));
    }
  } else {
    StatsConfig config;
    config.name = "dynamic:" + std::to_string(base.n_min) + ":" +
                  std::to_string(base.n_max);
    config.dynamic = true;
    config.split = base;
    configs.push_back(config);
  }

  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  std::vector<StatsReport> reports;
  for (const auto& config : configs) {
    reports.push_back(corpus_stats(records, config, shards));
    out << stats_to_json(reports.back()).dump() << "\n";
  }
  if (compare.size() == 2 && reports[0].total_subimages > 0) {
    json doc;
    doc["ratio"] = static_cast<double>(reports[1].total_subimages) /
                   static_cast<double>(reports[0].total_subimages);
    out << doc.dump() << "\n";
  }
  return 0;
}

int run_mix(const std::string& preset, const std::string& spec_path,
            int batch_size, int num_batches, std::optional<std::uint64_t> seed,
            const std::string& out_path, bool with_records) {
  MixtureSpec spec;
  if (!preset.empty()) {
    spec = mixture_preset(preset);
  } else if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) {
      throw ToolkitError(ErrorCode::io_error, "cannot open " + spec_path);
    }
    spec = load_mixture(in);
  } else {
    throw ToolkitError(ErrorCode::parse_error, "mix needs --preset or --spec");
  }
  if (seed) spec.seed = *seed;

  const BatchPlan plan = plan_batches(spec, batch_size, num_batches);
  if (!out_path.empty()) {
    std::ofstream file(out_path);
    if (!file) {
      throw ToolkitError(ErrorCode::io_error, "cannot open " + out_path);
    }
    for (std::size_t b = 0; b < plan.batches.size(); ++b) {
      json doc;
      doc["batch"] = b;
      json counts = json::object();
      std::vector<std::int64_t> per_cat(plan.weights.size(), 0);
      for (const auto& a : plan.batches[b]) per_cat[a.category] += 1;
      for (std::size_t c = 0; c < plan.weights.size(); ++c) {
        if (per_cat[c] > 0) counts[plan.weights[c].category] = per_cat[c];
      }
      doc["counts"] = counts;
      if (with_records) {
        json assignments = json::array();
        for (const auto& a : plan.batches[b]) {
          assignments.push_back({a.category, a.record});
        }
        doc["assignments"] = assignments;
      }
      file << doc.dump() << "\n";
    }
  }

  const EmpiricalReport report = empirical_report(plan);
  json doc;
  doc["seed"] = spec.seed;
  doc["batch_size"] = plan.batch_size;
  doc["batches"] = plan.batches.size();
  doc["chi_square"] = report.chi_square;
  doc["categories"] = json::array();
  std::map<std::string, double> group_expected;
  std::map<std::string, double> group_observed;
  for (std::size_t c = 0; c < report.weights.size(); ++c) {
    const auto& rw = report.weights[c];
    doc["categories"].push_back({{"group", rw.group},
                                 {"category", rw.category},
                                 {"expected", rw.probability},
                                 {"observed", report.observed_fractions[c]}});
    group_expected[rw.group] += rw.probability;
    group_observed[rw.group] += report.observed_fractions[c];
  }
  doc["groups"] = json::array();
  for (const auto& [name, expected] : group_expected) {
    doc["groups"].push_back({{"group", name},
                             {"expected", expected},
                             {"observed", group_observed[name]}});
  }
  std::cout << doc.dump(2) << "\n";
  return 0;
}

int run_score(const std::string& metrics_path, const std::string& format) {
  std::ifstream in(metrics_path);
  if (!in) {
    throw ToolkitError(ErrorCode::io_error, "cannot open " + metrics_path);
  }
  const MetricSet metrics = load_metrics(in);
  const ScoreReport report = score_report(metrics);
  if (format == "tsv") {
    for (const char* category : kScoreCategories) {
      std::cout << category << "\t" << report.category_averages.at(category)
                << "\n";
    }
    std::cout << "mmbase\t" << report.mmbase << "\n";
    for (const auto& name : report.excluded) {
      std::cout << "excluded\t" << name << "\n";
    }
  } else if (format == "json") {
    json doc;
    for (const auto& [category, value] : report.category_averages) {
      doc["categories"][category] = value;
    }
    doc["mmbase"] = report.mmbase;
    doc["excluded"] = report.excluded;
    std::cout << doc.dump(2) << "\n";
  } else {
    throw ToolkitError(ErrorCode::parse_error, "--format: json|tsv");
  }
  return 0;
}

int run_frames(int total, int n, int tokens) {
  const FramePlan plan = frame_plan(total, n, tokens);
  json doc;
  doc["total"] = plan.source_frames;
  doc["n"] = plan.sampled.size();
  doc["indices"] = plan.sampled;
  doc["tokens_per_frame"] = plan.tokens_per_frame;
  doc["total_tokens"] =
      static_cast<std::int64_t>(plan.sampled.size()) * plan.tokens_per_frame;
  std::cout << doc.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Image tiling, token layout, mixture, and scoring toolkit"};
  app.require_subcommand(1);

  // tile
  auto* tile = app.add_subcommand("tile", "plan image splitting");
  SplitFlags tile_flags;
  add_split_flags(tile, tile_flags);
  int tile_h = 0, tile_w = 0;
  std::string tile_manifest, tile_out;
  bool tile_tiles = false;
  tile->add_option("--height", tile_h, "image height in pixels");
  tile->add_option("--width", tile_w, "image width in pixels");
  tile->add_option("--manifest", tile_manifest, "manifest file (ndjson)");
  tile->add_option("--out", tile_out, "output path (default stdout)");
  tile->add_flag("--tiles", tile_tiles, "include tile rectangles");

  // stats
  auto* stats = app.add_subcommand("stats", "corpus tiling statistics");
  SplitFlags stats_flags;
  add_split_flags(stats, stats_flags);
  std::string stats_manifest, stats_synth, stats_out;
  std::size_t stats_count = 100000;
  std::uint64_t stats_seed = default_seed();
  std::vector<std::string> stats_configs, stats_compare;
  int stats_shards = 0;
  stats->add_option("--manifest", stats_manifest, "manifest file");
  stats->add_option("--synth", stats_synth,
                    "synthetic preset: web-mix|doc-pages|screenshots");
  stats->add_option("--count", stats_count, "synthetic record count");
  stats->add_option("--seed", stats_seed, "synthetic corpus seed");
  stats->add_option("--config", stats_configs,
                    "config spec, e.g. dynamic:4:9 or static:2x2");
  stats->add_option("--compare", stats_compare,
                    "two config specs to compare")->expected(2);
  stats->add_option("--shards", stats_shards, "shard count (0 = threads)");
  stats->add_option("--out", stats_out, "output path (default stdout)");

  // mix
  auto* mix = app.add_subcommand("mix", "plan mixture batches");
  std::string mix_preset, mix_spec, mix_out;
  int mix_batch = 256, mix_batches = 100;
  std::optional<std::uint64_t> mix_seed;
  bool mix_records = false;
  mix->add_option("--preset", mix_preset, "mm15-sft|mm15-cpt|mm15-pt");
  mix->add_option("--spec", mix_spec, "mixture config file (json)");
  mix->add_option("--batch", mix_batch, "batch size");
  mix->add_option("--batches", mix_batches, "number of batches");
  mix->add_option("--seed", mix_seed, "override spec seed");
  mix->add_option("--out", mix_out, "batch plan output file");
  mix->add_flag("--records", mix_records, "include record indices in plan");

  // score
  auto* score = app.add_subcommand("score", "benchmark score aggregation");
  std::string score_metrics, score_format = "json";
  score->add_option("--metrics", score_metrics, "metrics file (json)")
      ->required();
  score->add_option("--format", score_format, "json|tsv");

  // frames
  auto* frames = app.add_subcommand("frames", "video frame sampling plan");
  int frames_total = 0, frames_n = 24, frames_tokens = 144;
  frames->add_option("--total", frames_total, "source frame count")
      ->required();
  frames->add_option("--n", frames_n, "frames to sample");
  frames->add_option("--tokens", frames_tokens, "tokens per frame");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (tile->parsed()) {
      return run_tile(tile_flags, tile_h, tile_w, tile_manifest, tile_out,
                      tile_tiles);
    }
    if (stats->parsed()) {
      return run_stats(stats_flags, stats_manifest, stats_synth, stats_count,
                       stats_seed, stats_configs, stats_compare, stats_shards,
                       stats_out);
    }
    if (mix->parsed()) {
      return run_mix(mix_preset, mix_spec, mix_batch, mix_batches, mix_seed,
                     mix_out, mix_records);
    }
    if (score->parsed()) {
      return run_score(score_metrics, score_format);
    }
    if (frames->parsed()) {
      return run_frames(frames_total, frames_n, frames_tokens);
    }
  } catch (const ToolkitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
