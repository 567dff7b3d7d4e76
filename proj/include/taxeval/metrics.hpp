// Copyright 2026 The taxeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "taxeval/corpus.hpp"
#include "taxeval/llm.hpp"
#include "taxeval/taxonomy.hpp"

namespace taxeval {

struct RunItem {
  std::string instance_id;
  std::string gold;                         // leaf code or "Other"
  std::optional<PredictionSet> prediction;  // absent: gold-only or excluded
};

/// Everything the metric functions read for one taxonomy.
struct LabeledRun {
  std::string taxonomy_id;
  std::vector<std::string> leaf_labels;  // the m classes, taxonomy order
  double tau = 0.7;
  int k = 3;
  std::vector<RunItem> items;

  /// Items carrying a prediction set.
  std::size_t predicted_count() const;
  /// Throws ValidationError when ids repeat, k < 2, m < 2, a gold label is
  /// not a class or "Other", or a prediction set is larger than k.
  void validate() const;
};

/// Joins gold labels (resolved to leaf codes) with optional predictions.
/// Instances of `predictions` with no aggregated set stay unpredicted.
LabeledRun make_run(const Corpus& corpus, const Taxonomy& taxonomy, double tau, int k,
                    const PredictionRun* predictions = nullptr);

/// Number of entries whose confidence strictly exceeds tau.
std::size_t overlap(const PredictionSet& set, double tau);

/// Mean over predicted items of 1 - (Overlap - 1) / (k - 1) when Overlap > 0,
/// else 0. Throws ValidationError when no item has a prediction.
double exclusivity(const LabeledRun& run);

/// Share of items whose gold label is not "Other". Gold-only.
double coverage(const LabeledRun& run);

/// Entropy of the gold distribution over the m classes divided by ln m;
/// "Other" items are left out entirely. Throws when every label is "Other".
double balance(const LabeledRun& run);

/// Pooled F1 over predicted items using each set's top entry; "Other" takes
/// part as an ordinary label.
double micro_f1(const LabeledRun& run);

/// Unweighted mean of per-class F1 over all m classes, absent classes
/// included (they score 0). "Other" is not one of the classes.
double macro_f1(const LabeledRun& run);

struct ClassScore {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // gold count among predicted items

  bool operator==(const ClassScore&) const = default;
};

std::vector<ClassScore> per_class_scores(const LabeledRun& run);

/// Cohen's kappa between two label sequences. 1 when chance agreement is 1.
/// Throws ValidationError on empty or unequal-length input.
double cohens_kappa(std::span<const std::string> a, std::span<const std::string> b);

struct Scores {
  std::optional<double> exclusivity;
  double coverage = 0.0;
  double balance = 0.0;
  std::optional<double> macro_f1;
  std::optional<double> micro_f1;

  bool operator==(const Scores&) const = default;
};

struct MetricReport {
  std::string taxonomy_id;
  std::string taxonomy_name;
  std::size_t m = 0;
  std::size_t instances = 0;
  std::size_t excluded = 0;
  Scores scores;
  std::vector<ClassScore> per_class;  // empty for gold-only reports

  bool operator==(const MetricReport&) const = default;
};

/// Full metric suite. Prediction-side scores are left empty when no item
/// carries a prediction.
MetricReport evaluate_run(const LabeledRun& run, std::string taxonomy_name, std::size_t excluded = 0);

}  // namespace taxeval
