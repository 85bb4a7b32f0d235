// Copyright 2026 The mmprep Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mmprep/errors.hpp"

namespace mmprep {

// Raw benchmark values keyed by benchmark id. Multi-part benchmarks carry
// several values: MME (perception, cognition), ChartQA (human, augmented),
// RefCOCO (split values, 5 by convention), LVIS (box, point).
using MetricSet = std::map<std::string, std::vector<double>>;

struct ScoreReport {
  std::map<std::string, double> category_averages;
  double mmbase = 0.0;
  std::vector<std::string> excluded;  // present but never averaged
};

inline constexpr const char* kScoreCategories[] = {
    "general", "text-rich", "knowledge", "refer-ground", "multi-image"};

// Normalizes one benchmark to a percentage: MME -> (P+C)/2800*100,
// OCRBench -> score/1000*100, ChartQA -> mean(human, augmented),
// RefCOCO -> mean of splits, LVIS -> mean(box, point); everything else
// passes through.
double normalize_metric(const std::string& benchmark,
                        const std::vector<double>& raw);

// Arithmetic mean of the category's member benchmarks; every member must be
// present. Judge-excluded benchmarks (Ferret-Bench, MuirBench) never
// participate.
double category_average(const std::string& category, const MetricSet& metrics);

// Mean of the general, text-rich, and knowledge category averages.
double mmbase(const MetricSet& metrics);

ScoreReport score_report(const MetricSet& metrics);

MetricSet load_metrics(std::istream& in);

}  // namespace mmprep
