// Copyright 2026 The mmprep Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include "mmprep/tiler.hpp"

namespace mmprep {

inline constexpr int kQuantBins = 1000;  // Q

enum class CoordFrame { global, tile };

struct NormPoint {
  int x = 0;
  int y = 0;
  CoordFrame frame = CoordFrame::global;
  int tile_index = -1;  // valid when frame == tile
};

struct NormBox {
  int x1 = 0;
  int y1 = 0;
  int x2 = 0;
  int y2 = 0;
  CoordFrame frame = CoordFrame::global;
  int tile_index = -1;

  bool operator==(const NormBox&) const = default;
};

enum class Visibility { contained, clipped, outside };

struct LocalBox {
  NormBox box;
  Visibility visibility = Visibility::outside;
};

// Canonical wire form "<x1,y1,x2,y2>".
std::string encode_box(const NormBox& box);

// Accepts the canonical form plus optional whitespace around numbers.
NormBox parse_box(std::string_view text, int quant_bins = kQuantBins);

// Maps a global-frame box through the plan's resize into the tile's r x r
// frame. Partial overlap clips the box and reports it; no overlap reports
// outside. Grid (1,1) is an exact identity (the single tile is the whole
// image).
LocalBox global_to_local(const NormBox& box, const TilePlan& plan,
                         int tile_index, int quant_bins = kQuantBins);

// Inverse of the unclipped forward map, clamped to [0, Q).
NormBox local_to_global(const NormBox& box, const TilePlan& plan,
                        int tile_index, int quant_bins = kQuantBins);

// Intersection over union with inclusive integer extents
// (width = x2 - x1 + 1). Boxes must share a frame.
double box_iou(const NormBox& a, const NormBox& b);

}  // namespace mmprep
