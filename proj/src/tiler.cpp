// Copyright 2026 The mmprep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mmprep/tiler.hpp"

#include <algorithm>
#include <cstdlib>

namespace mmprep {
namespace {

using i128 = __int128;

// Scale s = min(n_h*r/h, n_w*r/w) as an exact fraction.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

Fraction grid_scale(const GridSpec& g, int r, int h, int w) {
  // n_h*r/h <= n_w*r/w  <=>  n_h*w <= n_w*h
  const std::int64_t lhs = static_cast<std::int64_t>(g.n_h) * w;
  const std::int64_t rhs = static_cast<std::int64_t>(g.n_w) * h;
  if (lhs <= rhs) {
    return {static_cast<std::int64_t>(g.n_h) * r, h};
  }
  return {static_cast<std::int64_t>(g.n_w) * r, w};
}

bool covers(const GridSpec& g, int r, int h, int w) {
  return static_cast<std::int64_t>(g.n_h) * r >= h &&
         static_cast<std::int64_t>(g.n_w) * r >= w;
}

// Padding objective n_h*n_w*r^2 - s^2*h*w as an exact rational with
// denominator s.den^2. Comparisons cross-multiply in 128-bit.
// Returns negative, zero, or positive like a three-way comparison of the
// padding of a and b.
int compare_padding(const GridSpec& ga, const Fraction& sa, const GridSpec& gb,
                    const Fraction& sb, int r, int h, int w) {
  const i128 r2 = static_cast<i128>(r) * r;
  const i128 hw = static_cast<i128>(h) * w;
  const i128 da2 = static_cast<i128>(sa.den) * sa.den;
  const i128 db2 = static_cast<i128>(sb.den) * sb.den;
  const i128 pa = static_cast<i128>(ga.tile_count()) * r2 * da2 -
                  static_cast<i128>(sa.num) * sa.num * hw;
  const i128 pb = static_cast<i128>(gb.tile_count()) * r2 * db2 -
                  static_cast<i128>(sb.num) * sb.num * hw;
  const i128 lhs = pa * db2;
  const i128 rhs = pb * da2;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

int compare_scale(const Fraction& sa, const Fraction& sb) {
  const i128 lhs = static_cast<i128>(sa.num) * sb.den;
  const i128 rhs = static_cast<i128>(sb.num) * sa.den;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

// |log(grid aspect) - log(image aspect)| proxy: compare the ratio
// max(a,b)/min(a,b) with a = n_h/n_w and b = h/w, via cross multiplication.
int compare_aspect_distance(const GridSpec& ga, const GridSpec& gb, int h,
                            int w) {
  const auto ratio = [&](const GridSpec& g) {
    const i128 p = static_cast<i128>(g.n_h) * w;  // a/b numerator
    const i128 q = static_cast<i128>(g.n_w) * h;
    return std::pair<i128, i128>(std::max(p, q), std::min(p, q));
  };
  const auto [maxa, mina] = ratio(ga);
  const auto [maxb, minb] = ratio(gb);
  const i128 lhs = maxa * minb;
  const i128 rhs = maxb * mina;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

// round(x * num / den) with ties away from zero; x, num, den positive.
int round_scaled(std::int64_t x, const Fraction& s) {
  const i128 twice = 2 * static_cast<i128>(x) * s.num + s.den;
  return static_cast<int>(twice / (2 * static_cast<i128>(s.den)));
}

TilePlan build_plan(int h, int w, const GridSpec& grid, const Fraction& s,
                    Branch branch, int r) {
  TilePlan plan;
  plan.source_h = h;
  plan.source_w = w;
  plan.grid = grid;
  plan.branch = branch;

  const int canvas_h = grid.n_h * r;
  const int canvas_w = grid.n_w * r;
  plan.resize.scale_num = s.num;
  plan.resize.scale_den = s.den;
  plan.resize.resized_h = std::clamp(round_scaled(h, s), 1, canvas_h);
  plan.resize.resized_w = std::clamp(round_scaled(w, s), 1, canvas_w);
  plan.resize.pad_bottom = canvas_h - plan.resize.resized_h;
  plan.resize.pad_right = canvas_w - plan.resize.resized_w;

  plan.tiles.reserve(static_cast<std::size_t>(grid.tile_count()));
  for (int i = 0; i < grid.n_h; ++i) {
    for (int j = 0; j < grid.n_w; ++j) {
      plan.tiles.push_back({j * r, i * r, r, r});
    }
  }
  plan.include_overview = !(grid == GridSpec{1, 1});
  plan.total_subimages = grid.tile_count() + (plan.include_overview ? 1 : 0);
  return plan;
}

}  // namespace

void SplitConfig::validate() const {
  if (n_min < 1 || n_min > n_max) {
    throw ToolkitError(ErrorCode::invalid_range,
                       "grid range requires 1 <= n_min <= n_max");
  }
  if (encoder_edge <= 0 || tokens_per_tile <= 0) {
    throw ToolkitError(ErrorCode::invalid_range,
                       "encoder_edge and tokens_per_tile must be positive");
  }
  if (multi_image_split_threshold < 1 || indicator_token_cost < 0) {
    throw ToolkitError(ErrorCode::invalid_range, "invalid split config");
  }
}

std::vector<GridSpec> candidate_grids(int n_min, int n_max) {
  if (n_min < 1 || n_min > n_max) {
    throw ToolkitError(ErrorCode::invalid_range,
                       "candidate_grids requires 1 <= n_min <= n_max");
  }
  std::vector<GridSpec> grids;
  for (int n_h = 1; n_h <= n_max; ++n_h) {
    for (int n_w = 1; n_w <= n_max; ++n_w) {
      const int product = n_h * n_w;
      if (product >= n_min && product <= n_max) {
        grids.push_back({n_h, n_w});
      }
    }
  }
  std::sort(grids.begin(), grids.end(), [](const GridSpec& a,
                                           const GridSpec& b) {
    if (a.tile_count() != b.tile_count()) return a.tile_count() < b.tile_count();
    if (a.n_h != b.n_h) return a.n_h < b.n_h;
    return a.n_w < b.n_w;
  });
  return grids;
}

TilePlan select_grid(int h, int w, const SplitConfig& cfg) {
  if (h < 1 || w < 1) {
    throw ToolkitError(ErrorCode::invalid_dimensions,
                       "image dimensions must be positive");
  }
  cfg.validate();
  const int r = cfg.encoder_edge;
  const auto grids = candidate_grids(cfg.n_min, cfg.n_max);

  // Tie-break order beyond the branch objective: fewer tiles, closer aspect,
  // then enumeration order (candidates are already sorted that way).
  const auto prefer_tiebreak = [&](const GridSpec& cand,
                                   const GridSpec& best) {
    if (cand.tile_count() != best.tile_count()) {
      return cand.tile_count() < best.tile_count();
    }
    const int c = compare_aspect_distance(cand, best, h, w);
    if (c != 0) return c < 0;
    return false;  // enumeration order: keep the earlier one
  };

  bool have_cover = false;
  bool have_any = false;
  GridSpec best_grid;
  Fraction best_scale;

  for (const auto& grid : grids) {
    const Fraction s = grid_scale(grid, r, h, w);
    const bool cover = covers(grid, r, h, w);
    if (cover) {
      if (!have_cover) {
        // First covering grid displaces any downscale-branch best.
        have_cover = true;
        best_grid = grid;
        best_scale = s;
      } else {
        const int c = compare_padding(grid, s, best_grid, best_scale, r, h, w);
        if (c < 0 || (c == 0 && prefer_tiebreak(grid, best_grid))) {
          best_grid = grid;
          best_scale = s;
        }
      }
    } else if (!have_cover) {
      if (!have_any) {
        best_grid = grid;
        best_scale = s;
      } else {
        const int c = compare_scale(s, best_scale);
        if (c > 0 || (c == 0 && prefer_tiebreak(grid, best_grid))) {
          best_grid = grid;
          best_scale = s;
        }
      }
    }
    have_any = true;
  }

  return build_plan(h, w, best_grid, best_scale,
                    have_cover ? Branch::cover : Branch::downscale, r);
}

TilePlan fixed_grid_plan(int h, int w, const GridSpec& grid,
                         const SplitConfig& cfg) {
  if (h < 1 || w < 1) {
    throw ToolkitError(ErrorCode::invalid_dimensions,
                       "image dimensions must be positive");
  }
  if (grid.n_h < 1 || grid.n_w < 1) {
    throw ToolkitError(ErrorCode::invalid_range, "grid sides must be >= 1");
  }
  const Fraction s = grid_scale(grid, cfg.encoder_edge, h, w);
  const Branch branch =
      covers(grid, cfg.encoder_edge, h, w) ? Branch::cover : Branch::downscale;
  return build_plan(h, w, grid, s, branch, cfg.encoder_edge);
}

TilePlan single_tile_plan(int h, int w, const SplitConfig& cfg) {
  return fixed_grid_plan(h, w, GridSpec{1, 1}, cfg);
}

double effective_resolution_mp(const TilePlan& plan, const SplitConfig& cfg) {
  const double r = static_cast<double>(cfg.encoder_edge);
  return plan.grid.tile_count() * r * r / 1e6;
}

SplitConfig override_grid_range(SplitConfig cfg, int n_min, int n_max) {
  if (n_min < 1 || n_min > n_max) {
    throw ToolkitError(ErrorCode::invalid_range,
                       "grid range requires 1 <= n_min <= n_max");
  }
  cfg.n_min = n_min;
  cfg.n_max = n_max;
  return cfg;
}

}  // namespace mmprep
