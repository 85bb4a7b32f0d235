// Copyright 2026 The mmprep Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "mmprep/tiler.hpp"

namespace mmprep {

enum class SegmentKind { tile_tokens, overview_tokens, indicator };

struct Segment {
  SegmentKind kind = SegmentKind::tile_tokens;
  int image_index = 0;  // zero-based image k
  int row = 0;          // one-based; 0 for the overview
  int col = 0;
  int token_count = 0;
  std::string text;  // indicator text, empty for token runs
};

struct TokenLayout {
  std::vector<Segment> segments;
  int total_tokens = 0;
  int images = 0;
};

struct FramePlan {
  int source_frames = 0;
  std::vector<int> sampled;
  int tokens_per_frame = 144;
};

struct TokenBudget {
  int image_tokens = 0;
  int indicator_tokens = 0;
  int total = 0;
};

// Flattens one record's tile plans into the token sequence: row-major tile
// runs per image, the overview run before or after them, and indicator
// segments per cfg.indicator_mode. Index mode tags every run with (k,i,j),
// (k,0,0) for the overview. Seps mode inserts ',' between tiles in a row,
// '<n>' between rows, and ':' immediately before the overview run.
TokenLayout assemble(const std::vector<TilePlan>& plans,
                     const SplitConfig& cfg);

// Splitting is enabled only for records with fewer than
// cfg.multi_image_split_threshold images.
bool multi_image_policy(int image_count, const SplitConfig& cfg);

// Uniform sampling of frame_count indices from [0, source_frames):
// index[i] = floor(i * M / N). Repeats indices when M < N.
FramePlan frame_plan(int source_frames, int frame_count,
                     int tokens_per_frame = 144);

TokenBudget token_budget(const TokenLayout& layout);

}  // namespace mmprep
