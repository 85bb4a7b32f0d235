// Copyright 2026 The mmprep Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mmprep/layout.hpp"

using namespace mmprep;

namespace {

SplitConfig make_cfg(IndicatorMode mode = IndicatorMode::none,
                     OverviewPosition pos = OverviewPosition::after) {
  SplitConfig cfg;
  cfg.indicator_mode = mode;
  cfg.overview_position = pos;
  return cfg;
}

TilePlan grid_plan(int n_h, int n_w, const SplitConfig& cfg) {
  return fixed_grid_plan(n_h * cfg.encoder_edge, n_w * cfg.encoder_edge,
                         GridSpec{n_h, n_w}, cfg);
}

int count_runs(const TokenLayout& layout) {
  int runs = 0;
  for (const auto& seg : layout.segments) {
    if (seg.kind != SegmentKind::indicator) ++runs;
  }
  return runs;
}

}  // namespace

TEST_CASE("(2,2)+overview, mode none: 5 runs, 720 tokens") {
  const auto cfg = make_cfg();
  const auto layout = assemble({grid_plan(2, 2, cfg)}, cfg);
  CHECK(count_runs(layout) == 5);
  CHECK(layout.total_tokens == 720);
  CHECK(layout.images == 1);
}

TEST_CASE("(1,1): single run, no overview, no indicators in any mode") {
  for (auto mode : {IndicatorMode::none, IndicatorMode::index,
                    IndicatorMode::seps}) {
    const auto cfg = make_cfg(mode);
    const auto layout = assemble({grid_plan(1, 1, cfg)}, cfg);
    CHECK(layout.segments.size() == 1);
    CHECK(layout.total_tokens == 144);
    CHECK(layout.segments[0].kind == SegmentKind::tile_tokens);
  }
}

TEST_CASE("index mode, overview after: tuple order") {
  const auto cfg = make_cfg(IndicatorMode::index, OverviewPosition::after);
  const auto layout = assemble({grid_plan(2, 2, cfg)}, cfg);
  std::vector<std::string> texts;
  for (const auto& seg : layout.segments) {
    if (seg.kind == SegmentKind::indicator) texts.push_back(seg.text);
  }
  const std::vector<std::string> expected = {"(0,1,1)", "(0,1,2)", "(0,2,1)",
                                             "(0,2,2)", "(0,0,0)"};
  CHECK(texts == expected);
  CHECK(layout.segments.back().kind == SegmentKind::overview_tokens);
}

TEST_CASE("index mode, overview before: overview run leads") {
  const auto cfg = make_cfg(IndicatorMode::index, OverviewPosition::before);
  const auto layout = assemble({grid_plan(2, 2, cfg)}, cfg);
  REQUIRE(layout.segments.size() >= 2);
  CHECK(layout.segments[0].kind == SegmentKind::indicator);
  CHECK(layout.segments[0].text == "(0,0,0)");
  CHECK(layout.segments[1].kind == SegmentKind::overview_tokens);
}

TEST_CASE("seps mode separator structure for (2,2)") {
  const auto cfg = make_cfg(IndicatorMode::seps, OverviewPosition::after);
  const auto layout = assemble({grid_plan(2, 2, cfg)}, cfg);
  std::vector<std::string> texts;
  for (const auto& seg : layout.segments) {
    if (seg.kind == SegmentKind::indicator) texts.push_back(seg.text);
  }
  const std::vector<std::string> expected = {",", "<n>", ",", ":"};
  CHECK(texts == expected);
  const auto budget = token_budget(layout);
  CHECK(budget.indicator_tokens == 4);
  CHECK(budget.image_tokens == 720);
}

TEST_CASE("multi-image ordering: image k precedes image k+1") {
  const auto cfg = make_cfg(IndicatorMode::index);
  const auto layout = assemble({grid_plan(2, 2, cfg), grid_plan(1, 1, cfg)},
                               cfg);
  int last_image = 0;
  for (const auto& seg : layout.segments) {
    CHECK(seg.image_index >= last_image);
    last_image = seg.image_index;
  }
  CHECK(layout.images == 2);
}

TEST_CASE("mode none and mode seps carry identical image tokens") {
  const auto none_cfg = make_cfg(IndicatorMode::none);
  const auto seps_cfg = make_cfg(IndicatorMode::seps);
  for (int n_h = 1; n_h <= 3; ++n_h) {
    for (int n_w = 1; n_w <= 3; ++n_w) {
      const auto a = token_budget(
          assemble({grid_plan(n_h, n_w, none_cfg)}, none_cfg));
      const auto b = token_budget(
          assemble({grid_plan(n_h, n_w, seps_cfg)}, seps_cfg));
      CHECK(a.image_tokens == b.image_tokens);
      CHECK(a.indicator_tokens == 0);
    }
  }
}

TEST_CASE("assemble rejects plans from a different tile size") {
  SplitConfig small = make_cfg();
  small.encoder_edge = 336;
  const auto plan = grid_plan(2, 2, small);
  const auto cfg = make_cfg();
  CHECK_THROWS_AS(assemble({plan}, cfg), ToolkitError);
  CHECK_THROWS_AS(assemble({}, cfg), ToolkitError);
}

TEST_CASE("multi-image policy threshold") {
  const auto cfg = make_cfg();
  CHECK(multi_image_policy(1, cfg));
  CHECK(multi_image_policy(2, cfg));
  CHECK_FALSE(multi_image_policy(3, cfg));
  CHECK_FALSE(multi_image_policy(7, cfg));
}

TEST_CASE("policy-off records cost exactly tokens_per_tile per image") {
  const auto cfg = make_cfg(IndicatorMode::index);
  std::vector<TilePlan> plans;
  for (int i = 0; i < 3; ++i) {
    plans.push_back(single_tile_plan(1900, 1100, cfg));
  }
  const auto budget = token_budget(assemble(plans, cfg));
  CHECK(budget.image_tokens == 3 * 144);
  CHECK(budget.indicator_tokens == 0);
}

TEST_CASE("frame_plan stride and identity cases") {
  const auto stride = frame_plan(48, 24);
  REQUIRE(stride.sampled.size() == 24);
  for (int i = 0; i < 24; ++i) CHECK(stride.sampled[static_cast<std::size_t>(i)] == 2 * i);

  const auto identity = frame_plan(24, 24);
  for (int i = 0; i < 24; ++i) CHECK(identity.sampled[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("frame_plan covers every source frame when M < N") {
  const auto plan = frame_plan(10, 24);
  REQUIRE(plan.sampled.size() == 24);
  std::vector<bool> seen(10, false);
  for (int idx : plan.sampled) {
    REQUIRE(idx >= 0);
    REQUIRE(idx < 10);
    seen[static_cast<std::size_t>(idx)] = true;
  }
  for (bool s : seen) CHECK(s);
}

TEST_CASE("frame_plan indices nondecreasing, first index zero") {
  for (int m : {1, 5, 24, 48, 97, 1000}) {
    for (int n : {1, 7, 24, 60}) {
      const auto plan = frame_plan(m, n);
      CHECK(plan.sampled.front() == 0);
      for (std::size_t i = 1; i < plan.sampled.size(); ++i) {
        CHECK(plan.sampled[i] >= plan.sampled[i - 1]);
      }
      CHECK(plan.sampled.back() < m);
    }
  }
  CHECK_THROWS_AS(frame_plan(0, 24), ToolkitError);
  CHECK_THROWS_AS(frame_plan(24, 0), ToolkitError);
}

TEST_CASE("token budget for (3,3)+overview") {
  const auto cfg = make_cfg();
  const auto budget = token_budget(assemble({grid_plan(3, 3, cfg)}, cfg));
  CHECK(budget.image_tokens == 1440);
  CHECK(budget.total == 1440);
}
