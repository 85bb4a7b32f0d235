// Copyright 2026 The mmprep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mmprep/coords.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>

namespace mmprep {
namespace {

constexpr double kEps = 1e-9;

int floor_bins(double v, int q) {
  return static_cast<int>(std::floor(v * q + kEps));
}

int ceil_bins(double v, int q) {
  return static_cast<int>(std::ceil(v * q - kEps));
}

int round_bins(double v, int q) {
  return static_cast<int>(std::llround(v * q));
}

void check_tile(const TilePlan& plan, int tile_index) {
  if (tile_index < 0 ||
      tile_index >= static_cast<int>(plan.tiles.size())) {
    throw ToolkitError(ErrorCode::invalid_tile, "tile index out of range");
  }
}

struct Interval {
  double lo = 0;
  double hi = 0;
};

// Half-open continuous extent of a quantized coordinate pair.
Interval to_interval(int a, int b, int q) {
  return {static_cast<double>(a) / q, static_cast<double>(b + 1) / q};
}

}  // namespace

std::string encode_box(const NormBox& box) {
  return "<" + std::to_string(box.x1) + "," + std::to_string(box.y1) + "," +
         std::to_string(box.x2) + "," + std::to_string(box.y2) + ">";
}

NormBox parse_box(std::string_view text, int quant_bins) {
  const auto fail = [&](ErrorCode code, const char* msg) -> ToolkitError {
    return ToolkitError(code, std::string(msg) + ": '" + std::string(text) +
                                  "'");
  };
  std::size_t pos = 0;
  const auto skip_ws = [&] {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  };
  skip_ws();
  if (pos >= text.size() || text[pos] != '<') {
    throw fail(ErrorCode::parse_error, "expected '<'");
  }
  ++pos;
  long values[4];
  for (int i = 0; i < 4; ++i) {
    skip_ws();
    const char* begin = text.data() + pos;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, values[i]);
    if (ec != std::errc{} || ptr == begin) {
      throw fail(ErrorCode::parse_error, "expected integer");
    }
    pos = static_cast<std::size_t>(ptr - text.data());
    skip_ws();
    const char expect = i < 3 ? ',' : '>';
    if (pos >= text.size() || text[pos] != expect) {
      throw fail(ErrorCode::parse_error, "malformed box");
    }
    ++pos;
  }
  skip_ws();
  if (pos != text.size()) {
    throw fail(ErrorCode::parse_error, "trailing characters");
  }
  for (long v : values) {
    if (v < 0 || v >= quant_bins) {
      throw fail(ErrorCode::range_error, "coordinate outside [0, Q)");
    }
  }
  if (values[0] > values[2] || values[1] > values[3]) {
    throw fail(ErrorCode::order_error, "inverted corners");
  }
  return NormBox{static_cast<int>(values[0]), static_cast<int>(values[1]),
                 static_cast<int>(values[2]), static_cast<int>(values[3])};
}

LocalBox global_to_local(const NormBox& box, const TilePlan& plan,
                         int tile_index, int quant_bins) {
  check_tile(plan, tile_index);
  const int q = quant_bins;
  if (plan.grid == GridSpec{1, 1}) {
    LocalBox out;
    out.box = box;
    out.box.frame = CoordFrame::tile;
    out.box.tile_index = tile_index;
    out.visibility = Visibility::contained;
    return out;
  }

  const double s = plan.resize.scale();
  const TileRect& tile = plan.tiles[static_cast<std::size_t>(tile_index)];
  const Interval gx = to_interval(box.x1, box.x2, q);
  const Interval gy = to_interval(box.y1, box.y2, q);

  // Source-normalized -> resized-canvas pixels -> tile-local fraction.
  const double x_lo = (gx.lo * plan.source_w * s - tile.x) / tile.w;
  const double x_hi = (gx.hi * plan.source_w * s - tile.x) / tile.w;
  const double y_lo = (gy.lo * plan.source_h * s - tile.y) / tile.h;
  const double y_hi = (gy.hi * plan.source_h * s - tile.y) / tile.h;

  LocalBox out;
  if (x_hi <= kEps || x_lo >= 1.0 - kEps || y_hi <= kEps ||
      y_lo >= 1.0 - kEps) {
    out.visibility = Visibility::outside;
    return out;
  }
  const bool clipped = x_lo < -kEps || x_hi > 1.0 + kEps || y_lo < -kEps ||
                       y_hi > 1.0 + kEps;
  const double cx_lo = std::clamp(x_lo, 0.0, 1.0);
  const double cx_hi = std::clamp(x_hi, 0.0, 1.0);
  const double cy_lo = std::clamp(y_lo, 0.0, 1.0);
  const double cy_hi = std::clamp(y_hi, 0.0, 1.0);

  out.box.x1 = std::clamp(floor_bins(cx_lo, q), 0, q - 1);
  out.box.y1 = std::clamp(floor_bins(cy_lo, q), 0, q - 1);
  out.box.x2 = std::clamp(ceil_bins(cx_hi, q) - 1, out.box.x1, q - 1);
  out.box.y2 = std::clamp(ceil_bins(cy_hi, q) - 1, out.box.y1, q - 1);
  out.box.frame = CoordFrame::tile;
  out.box.tile_index = tile_index;
  out.visibility = clipped ? Visibility::clipped : Visibility::contained;
  return out;
}

NormBox local_to_global(const NormBox& box, const TilePlan& plan,
                        int tile_index, int quant_bins) {
  check_tile(plan, tile_index);
  const int q = quant_bins;
  if (plan.grid == GridSpec{1, 1}) {
    NormBox out = box;
    out.frame = CoordFrame::global;
    out.tile_index = -1;
    return out;
  }

  const double s = plan.resize.scale();
  const TileRect& tile = plan.tiles[static_cast<std::size_t>(tile_index)];
  const Interval lx = to_interval(box.x1, box.x2, q);
  const Interval ly = to_interval(box.y1, box.y2, q);

  const double x_lo = (tile.x + lx.lo * tile.w) / (plan.source_w * s);
  const double x_hi = (tile.x + lx.hi * tile.w) / (plan.source_w * s);
  const double y_lo = (tile.y + ly.lo * tile.h) / (plan.source_h * s);
  const double y_hi = (tile.y + ly.hi * tile.h) / (plan.source_h * s);

  // Round to the nearest global bin: a tile bin may span more than one
  // global bin when the resized content is narrower than a tile, and
  // rounding halves the worst-case round-trip error versus flooring.
  NormBox out;
  out.x1 = std::clamp(round_bins(x_lo, q), 0, q - 1);
  out.y1 = std::clamp(round_bins(y_lo, q), 0, q - 1);
  out.x2 = std::clamp(round_bins(x_hi, q) - 1, out.x1, q - 1);
  out.y2 = std::clamp(round_bins(y_hi, q) - 1, out.y1, q - 1);
  out.frame = CoordFrame::global;
  out.tile_index = -1;
  return out;
}

double box_iou(const NormBox& a, const NormBox& b) {
  if (a.frame != b.frame ||
      (a.frame == CoordFrame::tile && a.tile_index != b.tile_index)) {
    throw ToolkitError(ErrorCode::frame_mismatch,
                       "boxes live in different frames");
  }
  const auto area = [](const NormBox& box) {
    return static_cast<std::int64_t>(box.x2 - box.x1 + 1) *
           (box.y2 - box.y1 + 1);
  };
  const std::int64_t iw =
      std::min(a.x2, b.x2) - std::max(a.x1, b.x1) + 1;
  const std::int64_t ih =
      std::min(a.y2, b.y2) - std::max(a.y1, b.y1) + 1;
  if (iw <= 0 || ih <= 0) return 0.0;
  const std::int64_t inter = iw * ih;
  const std::int64_t uni = area(a) + area(b) - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace mmprep
