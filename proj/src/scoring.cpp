// Copyright 2026 The mmprep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mmprep/scoring.hpp"

#include <array>
#include <istream>
#include <numeric>

#include "json.hpp"

namespace mmprep {
namespace {

enum class Normalizer { pass_through, mme, ocrbench, mean_of_parts };

struct BenchmarkInfo {
  const char* name;
  const char* category;  // nullptr for excluded benchmarks
  Normalizer normalizer;
  int arity;  // expected value count; -1 = one or more (mean of given parts)
  double max_raw;
};

constexpr std::array<BenchmarkInfo, 27> kBenchmarks{{
    {"MME", "general", Normalizer::mme, 2, 2800.0},
    {"SEED-IMG", "general", Normalizer::pass_through, 1, 100.0},
    {"POPE", "general", Normalizer::pass_through, 1, 100.0},
    {"LLaVA-W", "general", Normalizer::pass_through, 1, 150.0},
    {"MM-Vet", "general", Normalizer::pass_through, 1, 100.0},
    {"RealWorldQA", "general", Normalizer::pass_through, 1, 100.0},
    {"WTQ", "text-rich", Normalizer::pass_through, 1, 100.0},
    {"TabFact", "text-rich", Normalizer::pass_through, 1, 100.0},
    {"OCRBench", "text-rich", Normalizer::ocrbench, 1, 1000.0},
    {"ChartQA", "text-rich", Normalizer::mean_of_parts, 2, 100.0},
    {"TextVQA", "text-rich", Normalizer::pass_through, 1, 100.0},
    {"DocVQA", "text-rich", Normalizer::pass_through, 1, 100.0},
    {"InfoVQA", "text-rich", Normalizer::pass_through, 1, 100.0},
    {"AI2D", "knowledge", Normalizer::pass_through, 1, 100.0},
    {"ScienceQA", "knowledge", Normalizer::pass_through, 1, 100.0},
    {"MathVista", "knowledge", Normalizer::pass_through, 1, 100.0},
    {"MMMU", "knowledge", Normalizer::pass_through, 1, 100.0},
    {"Flickr30k", "refer-ground", Normalizer::pass_through, 1, 100.0},
    {"RefCOCO", "refer-ground", Normalizer::mean_of_parts, -1, 100.0},
    {"LVIS", "refer-ground", Normalizer::mean_of_parts, 2, 100.0},
    {"Ferret-Bench", nullptr, Normalizer::pass_through, 1, 100.0},
    {"QBench2", "multi-image", Normalizer::pass_through, 1, 100.0},
    {"Mantis", "multi-image", Normalizer::pass_through, 1, 100.0},
    {"NLVR2", "multi-image", Normalizer::pass_through, 1, 100.0},
    {"BLINK", "multi-image", Normalizer::pass_through, 1, 100.0},
    {"MVBench", "multi-image", Normalizer::pass_through, 1, 100.0},
    {"MuirBench", nullptr, Normalizer::pass_through, 1, 100.0},
}};

const BenchmarkInfo& lookup(const std::string& name) {
  for (const auto& info : kBenchmarks) {
    if (name == info.name) return info;
  }
  throw ToolkitError(ErrorCode::unknown_benchmark,
                     "unknown benchmark: " + name);
}

}  // namespace

double normalize_metric(const std::string& benchmark,
                        const std::vector<double>& raw) {
  const BenchmarkInfo& info = lookup(benchmark);
  if (info.arity > 0 && static_cast<int>(raw.size()) != info.arity) {
    throw ToolkitError(ErrorCode::out_of_range,
                       benchmark + ": expected " +
                           std::to_string(info.arity) + " value(s)");
  }
  if (raw.empty()) {
    throw ToolkitError(ErrorCode::out_of_range, benchmark + ": no values");
  }
  double sum = 0.0;
  for (double v : raw) {
    if (v < 0.0 || v > info.max_raw) {
      throw ToolkitError(ErrorCode::out_of_range,
                         benchmark + ": value out of range");
    }
    sum += v;
  }
  switch (info.normalizer) {
    case Normalizer::mme:
      return sum / 2800.0 * 100.0;
    case Normalizer::ocrbench:
      return sum / 1000.0 * 100.0;
    case Normalizer::mean_of_parts:
      return sum / static_cast<double>(raw.size());
    case Normalizer::pass_through:
      return raw.front();
  }
  return raw.front();
}

double category_average(const std::string& category,
                        const MetricSet& metrics) {
  double sum = 0.0;
  int count = 0;
  std::vector<std::string> missing;
  for (const auto& info : kBenchmarks) {
    if (info.category == nullptr || category != info.category) continue;
    const auto it = metrics.find(info.name);
    if (it == metrics.end()) {
      missing.emplace_back(info.name);
      continue;
    }
    sum += normalize_metric(info.name, it->second);
    ++count;
  }
  if (count == 0 && missing.empty()) {
    throw ToolkitError(ErrorCode::unknown_benchmark,
                       "unknown category: " + category);
  }
  if (!missing.empty()) {
    std::string names;
    for (const auto& name : missing) {
      if (!names.empty()) names += ", ";
      names += name;
    }
    throw ToolkitError(ErrorCode::missing_benchmark,
                       "category '" + category + "' missing: " + names);
  }
  return sum / count;
}

double mmbase(const MetricSet& metrics) {
  return (category_average("general", metrics) +
          category_average("text-rich", metrics) +
          category_average("knowledge", metrics)) /
         3.0;
}

ScoreReport score_report(const MetricSet& metrics) {
  ScoreReport report;
  for (const char* category : kScoreCategories) {
    report.category_averages[category] = category_average(category, metrics);
  }
  report.mmbase = mmbase(metrics);
  for (const auto& [name, values] : metrics) {
    if (lookup(name).category == nullptr) {
      report.excluded.push_back(name);
    }
  }
  return report;
}

MetricSet load_metrics(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ToolkitError(ErrorCode::parse_error,
                       std::string("metrics parse: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ToolkitError(ErrorCode::schema_error,
                       "metrics file must be a JSON object");
  }
  MetricSet metrics;
  for (const auto& [name, value] : doc.items()) {
    std::vector<double> values;
    if (value.is_number()) {
      values.push_back(value.get<double>());
    } else if (value.is_array()) {
      for (const auto& v : value) values.push_back(v.get<double>());
    } else {
      throw ToolkitError(ErrorCode::schema_error,
                         "metric '" + name + "' must be number or array");
    }
    metrics.emplace(name, std::move(values));
  }
  return metrics;
}

}  // namespace mmprep
