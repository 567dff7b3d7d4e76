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

#include <string>
#include <string_view>
#include <vector>

#include "taxeval/metrics.hpp"

namespace taxeval {

/// Known taxonomies first in their customary order, the rest alphabetically.
std::vector<std::string> order_taxonomies(std::vector<std::string> ids);

struct ModelRow {
  std::string model;
  std::vector<MetricReport> reports;  // one per taxonomy
};

/// Metric groups as columns, one sub-column per taxonomy, one row per model.
/// Scores have three decimals; missing ones print as "-".
std::string render_metric_table(const std::vector<ModelRow>& rows);

struct KappaRow {
  std::string pair;                 // "A vs B"
  std::vector<double> per_taxonomy;  // aligned with the table's taxonomy ids
};

/// Pairwise rows plus an "Average" row, one column per taxonomy.
std::string render_kappa_table(const std::vector<std::string>& taxonomy_ids,
                               const std::vector<KappaRow>& rows);

struct AblationReport;

/// Each taxonomy followed by its fused counterpart, one column per metric.
std::string render_ablation_table(const std::vector<AblationReport>& reports);

}  // namespace taxeval
