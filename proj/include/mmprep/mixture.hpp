// Copyright 2026 The mmprep Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mmprep/errors.hpp"

namespace mmprep {

enum class WeightForm { explicit_fraction, size_proportional, ratio_to_reference };

struct CategorySpec {
  std::string name;
  std::int64_t record_count = 1;
  WeightForm form = WeightForm::size_proportional;
  double fraction = 0.0;    // explicit_fraction
  double alpha = 0.0;       // ratio_to_reference
  std::string reference;    // ratio_to_reference, same group
};

struct GroupSpec {
  std::string name;
  double weight = 0.0;
  std::vector<CategorySpec> categories;
};

struct MixtureSpec {
  std::vector<GroupSpec> groups;
  std::uint64_t seed = 0;
};

struct ResolvedWeight {
  std::string group;
  std::string category;
  std::int64_t record_count = 0;
  double probability = 0.0;
};

struct Assignment {
  std::uint32_t category = 0;  // index into the resolved weight order
  std::int64_t record = 0;
};

struct BatchPlan {
  int batch_size = 0;
  std::vector<ResolvedWeight> weights;
  std::vector<std::vector<Assignment>> batches;
  std::vector<std::int64_t> realized_counts;  // per category
};

struct EmpiricalReport {
  std::vector<ResolvedWeight> weights;
  std::vector<double> observed_fractions;
  double chi_square = 0.0;
  std::int64_t sample_count = 0;
};

// Resolves a hierarchical mixture spec to per-category probabilities.
// Within a group, size-proportional categories get mass in proportion to
// their record counts, ratio categories get alpha times their reference's
// resolved mass, and explicit fractions claim their stated share of the
// group (scaled with the rest when no other form is present). Group masses
// are normalized to 1 and multiplied by the group's top-level weight.
std::vector<ResolvedWeight> resolve_weights(const MixtureSpec& spec);

// Deterministic batch plan: per batch, category counts follow the resolved
// weights via largest-remainder allocation with seeded residual tie-breaks;
// record indices come from a per-category seeded permutation stream that
// reshuffles on wraparound.
BatchPlan plan_batches(const MixtureSpec& spec, int batch_size,
                       int num_batches);

EmpiricalReport empirical_report(const BatchPlan& plan);

// Built-in configurations: "mm15-sft", "mm15-cpt", "mm15-pt".
MixtureSpec mixture_preset(std::string_view name);

MixtureSpec load_mixture(std::istream& in);
void save_mixture(std::ostream& out, const MixtureSpec& spec);

}  // namespace mmprep
