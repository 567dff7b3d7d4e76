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

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "taxeval/corpus.hpp"
#include "taxeval/llm.hpp"
#include "taxeval/metrics.hpp"
#include "taxeval/report.hpp"
#include "taxeval/taxonomy.hpp"

namespace taxeval {

/// Rewrites gold labels of `source` under a fusion. Absorbed labels (codes or
/// aliases) become the new leaf code, "Other" stays, anything else is kept
/// verbatim. Throws ValidationError for labels `source` does not know.
std::vector<std::string> relabel(std::span<const std::string> gold, const Taxonomy& source,
                                 const LabelRewrite& rewrite);

/// The corpus with its `source.id()` gold labels relabelled.
Corpus relabel_corpus(const Corpus& corpus, const Taxonomy& source, const LabelRewrite& rewrite);

struct ScoreDeltas {
  std::optional<double> exclusivity;
  double coverage = 0.0;
  double balance = 0.0;
  std::optional<double> macro_f1;
  std::optional<double> micro_f1;
};

/// after - before; a delta is empty when either side lacks the score.
ScoreDeltas score_deltas(const Scores& before, const Scores& after);

struct AblationReport {
  std::string taxonomy_id;
  std::size_t m_before = 0;
  std::size_t m_after = 0;
  std::vector<Merge> merges;
  bool relabel_only = false;
  MetricReport before;
  MetricReport after;
  ScoreDeltas deltas;
  std::vector<RawModelReply> audit_before;
  std::vector<RawModelReply> audit_after;
};

using BackendFactory = std::function<std::unique_ptr<Backend>(const Taxonomy&)>;

/// Evaluates (taxonomy, corpus) and (fused taxonomy, relabelled corpus) with
/// the same configuration. Unless `relabel_only`, both sides are predicted
/// afresh with a backend built for their own label menu.
AblationReport run_ablation(const Corpus& corpus, const Taxonomy& taxonomy, const FusionMap& fusion,
                            const EvalConfig& config, const BackendFactory& backends,
                            bool relabel_only = false);

nlohmann::ordered_json ablation_to_json(const AblationReport& report, const EvalConfig& config,
                                        const RunManifest& manifest);

}  // namespace taxeval
