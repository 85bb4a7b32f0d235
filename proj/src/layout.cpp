// Copyright 2026 The mmprep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mmprep/layout.hpp"

#include <cstdint>

namespace mmprep {
namespace {

Segment indicator(int image, int row, int col, int cost, std::string text) {
  Segment seg;
  seg.kind = SegmentKind::indicator;
  seg.image_index = image;
  seg.row = row;
  seg.col = col;
  seg.token_count = cost;
  seg.text = std::move(text);
  return seg;
}

Segment index_indicator(int image, int row, int col, int cost) {
  return indicator(image, row, col, cost,
                   "(" + std::to_string(image) + "," + std::to_string(row) +
                       "," + std::to_string(col) + ")");
}

void emit_overview(std::vector<Segment>& out, int image,
                   const SplitConfig& cfg) {
  if (cfg.indicator_mode == IndicatorMode::index) {
    out.push_back(index_indicator(image, 0, 0, cfg.indicator_token_cost));
  } else if (cfg.indicator_mode == IndicatorMode::seps) {
    out.push_back(indicator(image, 0, 0, cfg.indicator_token_cost, ":"));
  }
  Segment seg;
  seg.kind = SegmentKind::overview_tokens;
  seg.image_index = image;
  seg.token_count = cfg.tokens_per_tile;
  out.push_back(seg);
}

void emit_tiles(std::vector<Segment>& out, int image, const TilePlan& plan,
                const SplitConfig& cfg) {
  for (int i = 1; i <= plan.grid.n_h; ++i) {
    if (cfg.indicator_mode == IndicatorMode::seps && i > 1) {
      out.push_back(indicator(image, 0, 0, cfg.indicator_token_cost, "<n>"));
    }
    for (int j = 1; j <= plan.grid.n_w; ++j) {
      if (cfg.indicator_mode == IndicatorMode::seps && j > 1) {
        out.push_back(indicator(image, 0, 0, cfg.indicator_token_cost, ","));
      }
      if (cfg.indicator_mode == IndicatorMode::index) {
        out.push_back(index_indicator(image, i, j, cfg.indicator_token_cost));
      }
      Segment seg;
      seg.kind = SegmentKind::tile_tokens;
      seg.image_index = image;
      seg.row = i;
      seg.col = j;
      seg.token_count = cfg.tokens_per_tile;
      out.push_back(seg);
    }
  }
}

}  // namespace

TokenLayout assemble(const std::vector<TilePlan>& plans,
                     const SplitConfig& cfg) {
  cfg.validate();
  if (plans.empty()) {
    throw ToolkitError(ErrorCode::inconsistent_plan, "no tile plans given");
  }
  TokenLayout layout;
  layout.images = static_cast<int>(plans.size());
  for (int k = 0; k < layout.images; ++k) {
    const TilePlan& plan = plans[static_cast<std::size_t>(k)];
    if (!plan.tiles.empty() && plan.tiles.front().w != cfg.encoder_edge) {
      throw ToolkitError(ErrorCode::inconsistent_plan,
                         "tile plan does not match config encoder edge");
    }
    const bool overview = plan.include_overview;
    // An unsplit image is a single plain run: indicators only make sense
    // when there is more than one sub-image to tell apart.
    SplitConfig effective = cfg;
    if (!overview && plan.grid.tile_count() == 1) {
      effective.indicator_mode = IndicatorMode::none;
    }
    if (overview && cfg.overview_position == OverviewPosition::before) {
      emit_overview(layout.segments, k, effective);
    }
    emit_tiles(layout.segments, k, plan, effective);
    if (overview && cfg.overview_position == OverviewPosition::after) {
      emit_overview(layout.segments, k, effective);
    }
  }
  for (const Segment& seg : layout.segments) {
    layout.total_tokens += seg.token_count;
  }
  return layout;
}

bool multi_image_policy(int image_count, const SplitConfig& cfg) {
  return image_count < cfg.multi_image_split_threshold;
}

FramePlan frame_plan(int source_frames, int frame_count,
                     int tokens_per_frame) {
  if (source_frames < 1 || frame_count < 1) {
    throw ToolkitError(ErrorCode::invalid_range,
                       "frame counts must be positive");
  }
  FramePlan plan;
  plan.source_frames = source_frames;
  plan.tokens_per_frame = tokens_per_frame;
  plan.sampled.reserve(static_cast<std::size_t>(frame_count));
  for (int i = 0; i < frame_count; ++i) {
    plan.sampled.push_back(static_cast<int>(
        static_cast<std::int64_t>(i) * source_frames / frame_count));
  }
  return plan;
}

TokenBudget token_budget(const TokenLayout& layout) {
  TokenBudget budget;
  for (const Segment& seg : layout.segments) {
    if (seg.kind == SegmentKind::indicator) {
      budget.indicator_tokens += seg.token_count;
    } else {
      budget.image_tokens += seg.token_count;
    }
  }
  budget.total = budget.image_tokens + budget.indicator_tokens;
  return budget;
}

}  // namespace mmprep
