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

#include "taxeval/ablation.hpp"

#include "taxeval/error.hpp"

namespace taxeval {

std::vector<std::string> relabel(std::span<const std::string> gold, const Taxonomy& source,
                                 const LabelRewrite& rewrite) {
  std::vector<std::string> out;
  out.reserve(gold.size());
  for (const auto& label : gold) {
    auto leaf = source.resolve_label(label);
    if (!leaf) {
      throw ValidationError("label \"" + label + "\" is not a leaf of " + source.id() + " nor \"Other\"");
    }
    if (*leaf == kOtherLabel) {
      out.emplace_back(kOtherLabel);
    } else if (!rewrite.contains(*leaf)) {
      throw ValidationError("label \"" + label + "\" is outside the rewrite domain");
    } else if (rewrite.absorbs(*leaf)) {
      out.push_back(rewrite(*leaf));
    } else {
      out.push_back(label);
    }
  }
  return out;
}

Corpus relabel_corpus(const Corpus& corpus, const Taxonomy& source, const LabelRewrite& rewrite) {
  Corpus out = corpus;
  for (auto& inst : out.instances) {
    auto it = inst.gold.find(source.id());
    if (it == inst.gold.end()) {
      throw ValidationError("instance " + inst.id + ": no gold label for taxonomy " + source.id());
    }
    it->second = relabel(std::span(&it->second, 1), source, rewrite).front();
  }
  return out;
}

ScoreDeltas score_deltas(const Scores& before, const Scores& after) {
  auto diff = [](const std::optional<double>& b, const std::optional<double>& a) -> std::optional<double> {
    if (!a || !b) return std::nullopt;
    return *a - *b;
  };
  ScoreDeltas d;
  d.exclusivity = diff(before.exclusivity, after.exclusivity);
  d.coverage = after.coverage - before.coverage;
  d.balance = after.balance - before.balance;
  d.macro_f1 = diff(before.macro_f1, after.macro_f1);
  d.micro_f1 = diff(before.micro_f1, after.micro_f1);
  return d;
}

namespace {

MetricReport evaluate_side(const Corpus& corpus, const Taxonomy& taxonomy, const EvalConfig& config,
                           const BackendFactory& backends, bool relabel_only,
                           std::vector<RawModelReply>& audit) {
  if (relabel_only) {
    return evaluate_run(make_run(corpus, taxonomy, config.tau, config.k), taxonomy.name());
  }
  auto backend = backends(taxonomy);
  if (!backend) throw Error("no backend for taxonomy " + taxonomy.id());
  PredictionRun predictions = predict_corpus(corpus, taxonomy, config, *backend);
  audit = std::move(predictions.audit);
  return evaluate_run(make_run(corpus, taxonomy, config.tau, config.k, &predictions), taxonomy.name(),
                      predictions.excluded);
}

}  // namespace

AblationReport run_ablation(const Corpus& corpus, const Taxonomy& taxonomy, const FusionMap& fusion,
                            const EvalConfig& config, const BackendFactory& backends, bool relabel_only) {
  config.validate();
  FusionResult fused = fuse(taxonomy, fusion);
  const Corpus relabelled = relabel_corpus(corpus, taxonomy, fused.rewrite);

  AblationReport r;
  r.taxonomy_id = taxonomy.id();
  r.m_before = taxonomy.m();
  r.m_after = fused.taxonomy.m();
  r.merges = fusion.merges;
  r.relabel_only = relabel_only;
  r.before = evaluate_side(corpus, taxonomy, config, backends, relabel_only, r.audit_before);
  r.after = evaluate_side(relabelled, fused.taxonomy, config, backends, relabel_only, r.audit_after);
  r.deltas = score_deltas(r.before.scores, r.after.scores);
  return r;
}

nlohmann::ordered_json ablation_to_json(const AblationReport& report, const EvalConfig& config,
                                        const RunManifest& manifest) {
  auto strip = [](nlohmann::ordered_json j) {
    j.erase("manifest");
    j.erase("config");
    return j;
  };
  nlohmann::ordered_json j;
  j["taxonomy"] = report.taxonomy_id;
  j["config"] = config_to_json(config);
  j["relabel_only"] = report.relabel_only;
  auto& f = j["fusion"];
  f["m_before"] = report.m_before;
  f["m_after"] = report.m_after;
  auto& groups = f["merges"] = nlohmann::ordered_json::array();
  for (const auto& m : report.merges) {
    groups.push_back({{"new", m.replacement.code}, {"name", m.replacement.name}, {"absorb", m.absorbed}});
  }
  j["before"] = strip(report_to_json(report.before, config, manifest));
  j["after"] = strip(report_to_json(report.after, config, manifest));
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  j["deltas"] = {{"exclusivity", opt(report.deltas.exclusivity)},
                 {"coverage", report.deltas.coverage},
                 {"balance", report.deltas.balance},
                 {"macro_f1", opt(report.deltas.macro_f1)},
                 {"micro_f1", opt(report.deltas.micro_f1)}};
  j["manifest"] = manifest.to_json();
  return j;
}

}  // namespace taxeval
