// Copyright 2026 The mmprep Authors.
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any fails.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "grid_oracle.hpp"
#include "mmprep/coords.hpp"
#include "mmprep/corpus.hpp"
#include "mmprep/layout.hpp"
#include "mmprep/mixture.hpp"
#include "mmprep/scoring.hpp"
#include "mmprep/tiler.hpp"

using namespace mmprep;
using mmprep::testing::oracle_select;

namespace {

int g_failures = 0;

void report(int criterion, const char* description, bool pass,
            const std::string& detail = "") {
  std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL",
              criterion, description, detail.empty() ? "" : " -- ",
              detail.c_str());
  if (!pass) ++g_failures;
}

SplitConfig make_cfg(int r, int n_min, int n_max) {
  SplitConfig cfg;
  cfg.encoder_edge = r;
  cfg.n_min = n_min;
  cfg.n_max = n_max;
  return cfg;
}

// 1. Grid-selection oracle equivalence over 10k random inputs.
void criterion_1() {
  std::mt19937_64 rng(20240901);
  std::uniform_int_distribution<int> dim(1, 8000);
  const int radii[] = {336, 378, 672};
  const std::pair<int, int> ranges[] = {{1, 4}, {4, 4}, {4, 9},
                                        {1, 9}, {4, 16}, {9, 9}};
  int mismatches = 0;
  for (int it = 0; it < 10000; ++it) {
    const int h = dim(rng);
    const int w = dim(rng);
    const int r = radii[it % 3];
    const auto [lo, hi] = ranges[it % 6];
    const auto plan = select_grid(h, w, make_cfg(r, lo, hi));
    const auto oracle = oracle_select(h, w, r, lo, hi);
    const bool grid_ok = plan.grid == oracle.grid;
    const bool branch_ok = (plan.branch == Branch::cover) == oracle.cover;
    const bool scale_ok = plan.resize.scale_num * oracle.scale.den ==
                          oracle.scale.num * plan.resize.scale_den;
    if (!grid_ok || !branch_ok || !scale_ok) ++mismatches;
  }
  report(1, "grid selection matches brute-force oracle on 10k inputs",
         mismatches == 0,
         mismatches ? std::to_string(mismatches) + " mismatches" : "");
}

// 2. The 4-megapixel ceiling geometry at (4,9), r = 672.
void criterion_2() {
  const auto cfg = make_cfg(672, 4, 9);
  const auto square = select_grid(2016, 2016, cfg);
  const auto strip = select_grid(672, 6048, cfg);
  const auto over = select_grid(2017, 2017, cfg);
  const bool square_ok = square.grid == GridSpec{3, 3} &&
                         square.branch == Branch::cover &&
                         square.resize.pad_bottom == 0 &&
                         square.resize.pad_right == 0;
  const bool strip_ok = strip.grid == GridSpec{1, 9} &&
                        strip.branch == Branch::cover &&
                        strip.resize.pad_bottom == 0 &&
                        strip.resize.pad_right == 0;
  const bool over_ok = over.branch == Branch::downscale;
  report(2, "resolution ceiling: 2016^2 -> (3,3), 672x6048 -> (1,9), 2017^2 downscales",
         square_ok && strip_ok && over_ok);
}

// 3. Token accounting and effective resolutions from the split table.
void criterion_3() {
  SplitConfig cfg672 = make_cfg(672, 4, 9);
  SplitConfig cfg378 = make_cfg(378, 4, 9);
  const auto plan22 = fixed_grid_plan(1344, 1344, {2, 2}, cfg672);
  const auto plan33 = fixed_grid_plan(2016, 2016, {3, 3}, cfg672);
  const auto tokens22 = token_budget(assemble({plan22}, cfg672)).total;
  const auto tokens33 = token_budget(assemble({plan33}, cfg672)).total;
  const auto round1 = [](double v) { return std::round(v * 10.0) / 10.0; };
  const bool ok = tokens22 == 720 && tokens33 == 1440 &&
                  round1(effective_resolution_mp(plan22, cfg672)) == 1.8 &&
                  round1(effective_resolution_mp(plan33, cfg672)) == 4.1 &&
                  round1(effective_resolution_mp(plan33, cfg378)) == 1.3;
  report(3, "token totals 720/1440 and 1.8/4.1/1.3 MP accounting", ok);
}

// 4. Multi-image splitting policy.
void criterion_4() {
  const auto cfg = make_cfg(672, 4, 9);
  bool ok = multi_image_policy(1, cfg) && multi_image_policy(2, cfg) &&
            !multi_image_policy(3, cfg) && !multi_image_policy(5, cfg);
  for (int images : {3, 4, 6}) {
    std::vector<TilePlan> plans;
    for (int i = 0; i < images; ++i) {
      plans.push_back(single_tile_plan(1800, 1200, cfg));
    }
    const auto budget = token_budget(assemble(plans, cfg));
    ok = ok && budget.image_tokens == images * 144;
  }
  const auto split_plan = select_grid(1800, 1200, cfg);
  ok = ok && split_plan.total_subimages > 1;
  report(4, "records with >=3 images stay unsplit at 144 tokens each", ok);
}

// 5. Corpus efficiency statistics.
void criterion_5() {
  // Frozen total for web-mix @ 100k, seed 20240901, dynamic (4,9).
  constexpr std::int64_t kWebMixDynamicSubimages = 559362;

  SplitConfig base;
  const auto records =
      synth_corpus(synth_preset("web-mix"), 100000, 20240901);
  const auto static_cfg = parse_stats_config("static:2x2", base);
  const auto dynamic_cfg = parse_stats_config("dynamic:4:9", base);

  const auto static_report = corpus_stats(records, static_cfg);
  const auto dyn1 = corpus_stats(records, dynamic_cfg, 1);
  const auto dyn8 = corpus_stats(records, dynamic_cfg, 8);
  const auto dyn_again = corpus_stats(records, dynamic_cfg, 8);

  bool ok = static_report.total_subimages == 500000;
  ok = ok && dyn1.total_subimages == dyn8.total_subimages;
  ok = ok && dyn8.total_subimages == dyn_again.total_subimages;
  ok = ok && dyn8.grid_histogram == dyn1.grid_histogram;
  ok = ok && dyn8.total_subimages == kWebMixDynamicSubimages;
  const double ratio = static_cast<double>(dyn8.total_subimages) /
                       static_cast<double>(static_report.total_subimages);
  ok = ok && ratio >= 1.00 && ratio <= 1.25;
  // Every record contributes between 1 and n_max + 1 sub-images: with a
  // single image per record every plan has 4..9 tiles plus an overview.
  for (const auto& [key, count] : dyn8.grid_histogram) {
    const auto x = key.find('x');
    const int tiles = std::stoi(key.substr(0, x)) *
                      std::stoi(key.substr(x + 1));
    ok = ok && tiles >= 4 && tiles <= 9;
  }
  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "static=%lld dynamic=%lld ratio=%.4f",
                static_cast<long long>(static_report.total_subimages),
                static_cast<long long>(dyn8.total_subimages), ratio);
  report(5, "static 2x2 = 500k exactly; dynamic web-mix reproducible in [1.00,1.25]x",
         ok, detail);
}

// 6. Mixture fidelity for the three presets.
void criterion_6() {
  const auto sft = plan_batches(mixture_preset("mm15-sft"), 256, 10000);
  const auto rep = empirical_report(sft);
  std::map<std::string, double> group_observed;
  std::map<std::string, double> cat_observed;
  for (std::size_t c = 0; c < rep.weights.size(); ++c) {
    group_observed[rep.weights[c].group] += rep.observed_fractions[c];
    cat_observed[rep.weights[c].category] = rep.observed_fractions[c];
  }
  bool ok = std::abs(group_observed.at("single-image") - 0.8) <= 0.005 &&
            std::abs(group_observed.at("multi-image") - 0.1) <= 0.005 &&
            std::abs(group_observed.at("text-only") - 0.1) <= 0.005;
  const std::pair<const char*, double> single_fracs[] = {
      {"text-rich", 0.372}, {"refer-ground", 0.225}, {"general", 0.113},
      {"math", 0.056},      {"code", 0.023},         {"science", 0.011}};
  for (const auto& [name, frac] : single_fracs) {
    ok = ok && std::abs(cat_observed.at(name) - frac) <= 0.005;
  }

  const auto cpt = plan_batches(mixture_preset("mm15-cpt"), 256, 100);
  for (const auto& batch : cpt.batches) {
    std::vector<int> counts(cpt.weights.size(), 0);
    for (const auto& a : batch) counts[a.category] += 1;
    for (int c : counts) ok = ok && c == 64;
  }

  const auto pt = resolve_weights(mixture_preset("mm15-pt"));
  for (const auto& w : pt) {
    const double expected = w.group == "image-caption" ? 0.50
                            : w.group == "interleaved" ? 0.10
                                                       : 0.40;
    ok = ok && std::abs(w.probability - expected) < 1e-12;
  }
  report(6, "mm15-sft fractions within 0.5%; cpt 64/dataset; pt 50/10/40", ok);
}

// 7. Coordinate round trips.
void criterion_7() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> short_edge(256, 3000);
  std::uniform_real_distribution<double> aspect(1.0, 3.0);
  std::uniform_int_distribution<int> coord(0, kQuantBins - 1);
  const std::pair<int, int> ranges[] = {{1, 9}, {4, 9}, {4, 4}, {9, 9},
                                        {4, 16}, {1, 4}};
  int checked = 0;
  int violations = 0;
  for (int it = 0; checked < 10000 && it < 1000000; ++it) {
    const int s = short_edge(rng);
    const int l = static_cast<int>(s * aspect(rng));
    const bool tall = (rng() & 1) != 0;
    const int h = tall ? l : s;
    const int w = tall ? s : l;
    const auto [lo, hi] = ranges[it % 6];
    const auto plan = select_grid(h, w, make_cfg(672, lo, hi));
    NormBox box;
    box.x1 = coord(rng);
    box.x2 = coord(rng);
    box.y1 = coord(rng);
    box.y2 = coord(rng);
    if (box.x1 > box.x2) std::swap(box.x1, box.x2);
    if (box.y1 > box.y2) std::swap(box.y1, box.y2);
    for (int t = 0; t < plan.grid.tile_count(); ++t) {
      const auto local = global_to_local(box, plan, t);
      if (local.visibility != Visibility::contained) continue;
      const auto back = local_to_global(local.box, plan, t);
      if (std::abs(back.x1 - box.x1) > 1 || std::abs(back.y1 - box.y1) > 1 ||
          std::abs(back.x2 - box.x2) > 1 || std::abs(back.y2 - box.y2) > 1) {
        ++violations;
      }
      ++checked;
    }
  }
  bool identity_ok = true;
  const auto unit = select_grid(640, 480, make_cfg(672, 1, 9));
  for (int i = 0; i < 100; ++i) {
    NormBox box;
    box.x1 = coord(rng);
    box.x2 = coord(rng);
    box.y1 = coord(rng);
    box.y2 = coord(rng);
    if (box.x1 > box.x2) std::swap(box.x1, box.x2);
    if (box.y1 > box.y2) std::swap(box.y1, box.y2);
    const auto local = global_to_local(box, unit, 0);
    const auto back = local_to_global(local.box, unit, 0);
    identity_ok = identity_ok && local.visibility == Visibility::contained &&
                  local.box.x1 == box.x1 && local.box.y1 == box.y1 &&
                  local.box.x2 == box.x2 && local.box.y2 == box.y2 &&
                  back.x1 == box.x1 && back.y1 == box.y1 &&
                  back.x2 == box.x2 && back.y2 == box.y2;
  }
  report(7, "10k contained round trips within 1 bin; grid (1,1) exact",
         checked >= 10000 && violations == 0 && identity_ok,
         std::to_string(checked) + " checked, " +
             std::to_string(violations) + " violations");
}

// 8. Scoring arithmetic.
void criterion_8() {
  const double mme = normalize_metric("MME", {1478.4, 319.6});
  bool ok = std::abs(mme - 64.21428571428571) < 1e-9;
  ok = ok && std::abs(normalize_metric("OCRBench", {657.0}) - 65.7) < 1e-9;

  MetricSet metrics{
      {"MME", {1478.4, 319.6}}, {"SEED-IMG", {72.4}}, {"POPE", {88.1}},
      {"LLaVA-W", {73.0}},      {"MM-Vet", {41.0}},   {"RealWorldQA", {56.9}},
      {"WTQ", {38.1}},          {"TabFact", {70.8}},  {"OCRBench", {657.0}},
      {"ChartQA", {74.2, 82.6}}, {"TextVQA", {72.8}}, {"DocVQA", {87.7}},
      {"InfoVQA", {58.5}},      {"AI2D", {65.7}},     {"ScienceQA", {85.8}},
      {"MathVista", {44.4}},    {"MMMU", {37.1}},     {"Flickr30k", {81.2}},
      {"RefCOCO", {85.0, 78.2, 79.5, 70.4, 80.1}},    {"LVIS", {62.3, 68.9}},
      {"QBench2", {73.2}},      {"Mantis", {54.8}},   {"NLVR2", {83.8}},
      {"BLINK", {47.7}},        {"MVBench", {46.8}},
  };
  const auto base = score_report(metrics);
  metrics["Ferret-Bench"] = {99.0};
  metrics["MuirBench"] = {1.0};
  const auto with_excluded = score_report(metrics);
  for (const auto& [category, value] : base.category_averages) {
    ok = ok && value == with_excluded.category_averages.at(category);
  }
  ok = ok && base.mmbase == with_excluded.mmbase &&
       with_excluded.excluded.size() == 2;
  report(8, "MME/OCRBench normalization exact; excluded benchmarks inert", ok);
}

// 9. Video frame sampling.
void criterion_9() {
  const auto stride = frame_plan(48, 24);
  bool ok = stride.sampled.size() == 24;
  for (int i = 0; i < 24 && ok; ++i) {
    ok = stride.sampled[static_cast<std::size_t>(i)] == 2 * i;
  }
  const auto identity = frame_plan(24, 24);
  for (int i = 0; i < 24 && ok; ++i) {
    ok = identity.sampled[static_cast<std::size_t>(i)] == i;
  }
  const auto repeat = frame_plan(10, 24);
  std::vector<bool> seen(10, false);
  for (int idx : repeat.sampled) {
    if (idx < 0 || idx >= 10) {
      ok = false;
      break;
    }
    seen[static_cast<std::size_t>(idx)] = true;
  }
  for (bool s : seen) ok = ok && s;
  report(9, "frame sampling: stride-2 at 48, identity at 24, full cover below 24",
         ok);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
