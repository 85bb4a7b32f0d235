// Copyright 2026 The mmprep Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "mmprep/errors.hpp"

namespace mmprep {

struct GridSpec {
  int n_h = 1;  // rows
  int n_w = 1;  // columns

  int tile_count() const { return n_h * n_w; }
  bool operator==(const GridSpec&) const = default;
};

enum class IndicatorMode { none, index, seps };
enum class OverviewPosition { before, after };

struct SplitConfig {
  int encoder_edge = 672;  // side length r of each square tile
  int n_min = 4;
  int n_max = 9;
  int tokens_per_tile = 144;
  IndicatorMode indicator_mode = IndicatorMode::none;
  OverviewPosition overview_position = OverviewPosition::after;
  int multi_image_split_threshold = 3;
  int indicator_token_cost = 1;

  void validate() const;
};

// Longer-side resize of the source onto the chosen grid canvas.
// scale = scale_num / scale_den, kept exact for downstream coordinate maps.
struct ResizePlan {
  std::int64_t scale_num = 1;
  std::int64_t scale_den = 1;
  int resized_h = 0;
  int resized_w = 0;
  int pad_bottom = 0;
  int pad_right = 0;

  double scale() const {
    return static_cast<double>(scale_num) / static_cast<double>(scale_den);
  }
};

struct TileRect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool operator==(const TileRect&) const = default;
};

enum class Branch { cover, downscale };

struct TilePlan {
  int source_h = 0;
  int source_w = 0;
  GridSpec grid;
  Branch branch = Branch::cover;
  ResizePlan resize;
  std::vector<TileRect> tiles;  // row-major, each encoder_edge x encoder_edge
  bool include_overview = false;
  int total_subimages = 0;
};

// All (n_h, n_w) with n_min <= n_h*n_w <= n_max, sorted by
// (tile_count, n_h, n_w).
std::vector<GridSpec> candidate_grids(int n_min, int n_max);

// Chooses the grid for an (h, w) input. If some candidate canvas covers the
// longer-side-resized image without shrinking it, picks the cover-branch grid
// with the least padding; otherwise picks the grid with the largest scale
// (least resolution loss). Ties go to fewer tiles, then the grid whose aspect
// ratio is closest to the image's in log space, then enumeration order.
TilePlan select_grid(int h, int w, const SplitConfig& cfg);

// Plan for a fixed grid regardless of the candidate objective (static
// splitting, or the unsplit path).
TilePlan fixed_grid_plan(int h, int w, const GridSpec& grid,
                         const SplitConfig& cfg);

// Plan for a single unsplit frame: grid (1,1), no overview.
TilePlan single_tile_plan(int h, int w, const SplitConfig& cfg);

// tile_count * r^2 / 1e6; the overview does not count.
double effective_resolution_mp(const TilePlan& plan, const SplitConfig& cfg);

SplitConfig override_grid_range(SplitConfig cfg, int n_min, int n_max);

}  // namespace mmprep
