// Copyright 2026 The mmprep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mmprep/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>

#include "json.hpp"

namespace mmprep {
namespace {

using json = nlohmann::json;

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  // splitmix64 over the combined state
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1) + 0x85ebca6bULL * c;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Masses within one group before normalization. Ratio categories chain to
// their reference; chains rooted at an explicit fraction stay on the
// explicit side of the remainder split.
struct GroupResolution {
  std::vector<double> mass;
  std::vector<bool> explicit_rooted;
};

GroupResolution resolve_group(const GroupSpec& group) {
  const auto& cats = group.categories;
  const std::size_t n = cats.size();
  std::map<std::string, std::size_t> by_name;
  for (std::size_t i = 0; i < n; ++i) {
    if (!by_name.emplace(cats[i].name, i).second) {
      throw ToolkitError(ErrorCode::schema_error,
                         "duplicate category '" + cats[i].name +
                             "' in group '" + group.name + "'");
    }
  }

  double size_total = 0.0;
  for (const auto& cat : cats) {
    if (cat.record_count < 1) {
      throw ToolkitError(ErrorCode::schema_error,
                         "record_count must be >= 1: " + cat.name);
    }
    if (cat.form == WeightForm::size_proportional) {
      size_total += static_cast<double>(cat.record_count);
    }
    if (cat.form == WeightForm::explicit_fraction &&
        (cat.fraction <= 0.0 || cat.fraction > 1.0)) {
      throw ToolkitError(ErrorCode::schema_error,
                         "explicit fraction must be in (0,1]: " + cat.name);
    }
    if (cat.form == WeightForm::ratio_to_reference && cat.alpha < 0.0) {
      throw ToolkitError(ErrorCode::schema_error,
                         "alpha must be nonnegative: " + cat.name);
    }
  }

  GroupResolution res;
  res.mass.assign(n, 0.0);
  res.explicit_rooted.assign(n, false);
  std::vector<int> state(n, 0);  // 0 unvisited, 1 in progress, 2 done

  const auto resolve = [&](auto&& self, std::size_t i) -> void {
    if (state[i] == 2) return;
    if (state[i] == 1) {
      throw ToolkitError(ErrorCode::cyclic_reference,
                         "cyclic ratio references at '" + cats[i].name + "'");
    }
    state[i] = 1;
    const CategorySpec& cat = cats[i];
    switch (cat.form) {
      case WeightForm::explicit_fraction:
        res.mass[i] = cat.fraction;
        res.explicit_rooted[i] = true;
        break;
      case WeightForm::size_proportional:
        res.mass[i] = static_cast<double>(cat.record_count) / size_total;
        break;
      case WeightForm::ratio_to_reference: {
        const auto it = by_name.find(cat.reference);
        if (it == by_name.end()) {
          throw ToolkitError(ErrorCode::schema_error,
                             "unknown reference '" + cat.reference +
                                 "' in group '" + group.name + "'");
        }
        self(self, it->second);
        res.mass[i] = cat.alpha * res.mass[it->second];
        res.explicit_rooted[i] = res.explicit_rooted[it->second];
        break;
      }
    }
    state[i] = 2;
  };
  for (std::size_t i = 0; i < n; ++i) resolve(resolve, i);

  // Explicit fractions claim their stated share of the group; the remaining
  // forms split what is left in proportion to each other.
  double explicit_total = 0.0;
  double other_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    (res.explicit_rooted[i] ? explicit_total : other_total) += res.mass[i];
  }
  if (explicit_total > 0.0 && other_total > 0.0) {
    const double remaining = 1.0 - explicit_total;
    if (remaining <= 1e-12) {
      throw ToolkitError(ErrorCode::zero_total_mass,
                         "explicit fractions leave no mass for group '" +
                             group.name + "'");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!res.explicit_rooted[i]) {
        res.mass[i] *= remaining / other_total;
      }
    }
  }
  const double total = std::accumulate(res.mass.begin(), res.mass.end(), 0.0);
  if (total <= 0.0) {
    throw ToolkitError(ErrorCode::zero_total_mass,
                       "group '" + group.name + "' has zero total mass");
  }
  for (double& m : res.mass) m /= total;
  return res;
}

class PermutationStream {
 public:
  PermutationStream(std::int64_t record_count, std::uint64_t master_seed,
                    std::uint64_t stream_id)
      : count_(record_count), master_seed_(master_seed), stream_id_(stream_id) {
    order_.resize(static_cast<std::size_t>(count_));
    reshuffle();
  }

  std::int64_t next() {
    if (pos_ == order_.size()) {
      ++epoch_;
      reshuffle();
    }
    return order_[pos_++];
  }

 private:
  void reshuffle() {
    std::iota(order_.begin(), order_.end(), std::int64_t{0});
    std::mt19937_64 rng(mix_seed(master_seed_, stream_id_, epoch_));
    std::shuffle(order_.begin(), order_.end(), rng);
    pos_ = 0;
  }

  std::int64_t count_;
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t epoch_ = 0;
  std::size_t pos_ = 0;
  std::vector<std::int64_t> order_;
};

const char* form_name(WeightForm form) {
  switch (form) {
    case WeightForm::explicit_fraction: return "fraction";
    case WeightForm::size_proportional: return "size";
    case WeightForm::ratio_to_reference: return "ratio";
  }
  return "size";
}

WeightForm form_from_name(const std::string& name) {
  if (name == "fraction") return WeightForm::explicit_fraction;
  if (name == "size") return WeightForm::size_proportional;
  if (name == "ratio") return WeightForm::ratio_to_reference;
  throw ToolkitError(ErrorCode::schema_error, "unknown weight form: " + name);
}

}  // namespace

std::vector<ResolvedWeight> resolve_weights(const MixtureSpec& spec) {
  if (spec.groups.empty()) {
    throw ToolkitError(ErrorCode::schema_error, "mixture has no groups");
  }
  double top_total = 0.0;
  for (const auto& group : spec.groups) top_total += group.weight;
  if (std::abs(top_total - 1.0) > 1e-9) {
    throw ToolkitError(ErrorCode::schema_error,
                       "top-level group weights must sum to 1");
  }
  std::vector<ResolvedWeight> out;
  for (const auto& group : spec.groups) {
    const GroupResolution res = resolve_group(group);
    for (std::size_t i = 0; i < group.categories.size(); ++i) {
      const auto& cat = group.categories[i];
      out.push_back({group.name, cat.name, cat.record_count,
                     group.weight * res.mass[i]});
    }
  }
  return out;
}

BatchPlan plan_batches(const MixtureSpec& spec, int batch_size,
                       int num_batches) {
  if (batch_size < 1 || num_batches < 1) {
    throw ToolkitError(ErrorCode::invalid_range,
                       "batch_size and num_batches must be positive");
  }
  BatchPlan plan;
  plan.batch_size = batch_size;
  plan.weights = resolve_weights(spec);
  const std::size_t n = plan.weights.size();
  plan.realized_counts.assign(n, 0);

  std::vector<PermutationStream> streams;
  streams.reserve(n);
  for (std::size_t c = 0; c < n; ++c) {
    if (plan.weights[c].record_count < 1) {
      throw ToolkitError(ErrorCode::empty_category,
                         "empty category: " + plan.weights[c].category);
    }
    streams.emplace_back(plan.weights[c].record_count, spec.seed,
                         static_cast<std::uint64_t>(c));
  }

  plan.batches.reserve(static_cast<std::size_t>(num_batches));
  std::vector<std::size_t> order(n);
  for (int b = 0; b < num_batches; ++b) {
    std::vector<int> counts(n, 0);
    std::vector<double> remainder(n, 0.0);
    int assigned = 0;
    for (std::size_t c = 0; c < n; ++c) {
      const double expected = plan.weights[c].probability * batch_size;
      counts[c] = static_cast<int>(std::floor(expected + 1e-9));
      remainder[c] = expected - counts[c];
      assigned += counts[c];
    }
    // Residual slots go to the largest remainders; equal remainders are
    // ordered by a per-batch seeded shuffle.
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(mix_seed(spec.seed, 0xba7c4e5dULL,
                                 static_cast<std::uint64_t>(b)));
    std::shuffle(order.begin(), order.end(), rng);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b2) {
                       return remainder[a] > remainder[b2];
                     });
    for (std::size_t k = 0; assigned < batch_size; ++k) {
      counts[order[k % n]] += 1;
      ++assigned;
    }

    std::vector<Assignment> batch;
    batch.reserve(static_cast<std::size_t>(batch_size));
    for (std::size_t c = 0; c < n; ++c) {
      for (int i = 0; i < counts[c]; ++i) {
        batch.push_back({static_cast<std::uint32_t>(c), streams[c].next()});
      }
      plan.realized_counts[c] += counts[c];
    }
    plan.batches.push_back(std::move(batch));
  }
  return plan;
}

EmpiricalReport empirical_report(const BatchPlan& plan) {
  if (plan.batches.empty()) {
    throw ToolkitError(ErrorCode::invalid_range, "empty batch plan");
  }
  EmpiricalReport report;
  report.weights = plan.weights;
  report.sample_count =
      static_cast<std::int64_t>(plan.batches.size()) * plan.batch_size;
  report.observed_fractions.resize(plan.weights.size());
  for (std::size_t c = 0; c < plan.weights.size(); ++c) {
    const double observed = static_cast<double>(plan.realized_counts[c]);
    report.observed_fractions[c] =
        observed / static_cast<double>(report.sample_count);
    const double expected =
        plan.weights[c].probability * static_cast<double>(report.sample_count);
    if (expected > 0.0) {
      report.chi_square += (observed - expected) * (observed - expected) /
                           expected;
    }
  }
  return report;
}

MixtureSpec mixture_preset(std::string_view name) {
  MixtureSpec spec;
  spec.seed = 7151;
  const auto frac = [](std::string n, double f, std::int64_t records) {
    CategorySpec cat;
    cat.name = std::move(n);
    cat.form = WeightForm::explicit_fraction;
    cat.fraction = f;
    cat.record_count = records;
    return cat;
  };
  if (name == "mm15-sft") {
    GroupSpec single{"single-image", 0.8, {
        frac("text-rich", 0.372, 372000),
        frac("refer-ground", 0.225, 225000),
        frac("general", 0.113, 113000),
        frac("math", 0.056, 56000),
        frac("code", 0.023, 23000),
        frac("science", 0.011, 11000),
    }};
    GroupSpec multi{"multi-image", 0.1, {frac("multi-image", 1.0, 100000)}};
    GroupSpec text{"text-only", 0.1, {frac("text-only", 1.0, 100000)}};
    spec.groups = {single, multi, text};
    return spec;
  }
  if (name == "mm15-cpt") {
    GroupSpec ocr{"ocr", 1.0, {
        frac("pdfa", 0.25, 100000),
        frac("idl", 0.25, 100000),
        frac("rendered-text", 0.25, 100000),
        frac("docstruct-4m", 0.25, 100000),
    }};
    spec.groups = {ocr};
    return spec;
  }
  if (name == "mm15-pt") {
    GroupSpec caption{"image-caption", 0.5, {frac("image-caption", 1.0, 100000)}};
    GroupSpec interleaved{"interleaved", 0.1, {frac("interleaved", 1.0, 100000)}};
    GroupSpec text{"text-only", 0.4, {frac("text-only", 1.0, 100000)}};
    spec.groups = {caption, interleaved, text};
    return spec;
  }
  throw ToolkitError(ErrorCode::schema_error,
                     "unknown mixture preset: " + std::string(name));
}

MixtureSpec load_mixture(std::istream& in) {
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ToolkitError(ErrorCode::parse_error,
                       std::string("mixture config parse: ") + e.what());
  }
  try {
    MixtureSpec spec;
    spec.seed = doc.value("seed", std::uint64_t{0});
    for (const auto& g : doc.at("groups")) {
      GroupSpec group;
      group.name = g.at("name").get<std::string>();
      group.weight = g.at("weight").get<double>();
      for (const auto& c : g.at("categories")) {
        CategorySpec cat;
        cat.name = c.at("name").get<std::string>();
        cat.record_count = c.value("records", std::int64_t{1});
        cat.form = form_from_name(c.value("form", std::string("size")));
        cat.fraction = c.value("fraction", 0.0);
        cat.alpha = c.value("alpha", 0.0);
        cat.reference = c.value("reference", std::string());
        group.categories.push_back(std::move(cat));
      }
      spec.groups.push_back(std::move(group));
    }
    return spec;
  } catch (const json::exception& e) {
    throw ToolkitError(ErrorCode::schema_error,
                       std::string("mixture config schema: ") + e.what());
  }
}

void save_mixture(std::ostream& out, const MixtureSpec& spec) {
  json doc;
  doc["seed"] = spec.seed;
  doc["groups"] = json::array();
  for (const auto& group : spec.groups) {
    json g;
    g["name"] = group.name;
    g["weight"] = group.weight;
    g["categories"] = json::array();
    for (const auto& cat : group.categories) {
      json c;
      c["name"] = cat.name;
      c["records"] = cat.record_count;
      c["form"] = form_name(cat.form);
      if (cat.form == WeightForm::explicit_fraction) c["fraction"] = cat.fraction;
      if (cat.form == WeightForm::ratio_to_reference) {
        c["alpha"] = cat.alpha;
        c["reference"] = cat.reference;
      }
      g["categories"].push_back(std::move(c));
    }
    doc["groups"].push_back(std::move(g));
  }
  out << doc.dump(2) << "\n";
}

}  // namespace mmprep
