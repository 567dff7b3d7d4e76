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

#include "taxeval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "taxeval/error.hpp"
#include "taxeval/kernels.hpp"

namespace taxeval {

std::size_t LabeledRun::predicted_count() const {
  return static_cast<std::size_t>(
      std::count_if(items.begin(), items.end(), [](const RunItem& it) { return it.prediction.has_value(); }));
}

void LabeledRun::validate() const {
  if (k < 2) throw ValidationError("k must be at least 2");
  if (leaf_labels.size() < 2) throw ValidationError("a run needs at least 2 classes");
  std::set<std::string_view> classes(leaf_labels.begin(), leaf_labels.end());
  std::set<std::string_view> ids;
  for (const auto& item : items) {
    if (!ids.insert(item.instance_id).second) {
      throw ValidationError("duplicate instance id " + item.instance_id);
    }
    if (item.gold != kOtherLabel && !classes.count(item.gold)) {
      throw ValidationError("instance " + item.instance_id + ": gold label \"" + item.gold +
                            "\" is not a class of " + taxonomy_id);
    }
    if (item.prediction && item.prediction->entries.size() > static_cast<std::size_t>(k)) {
      throw ValidationError("instance " + item.instance_id + ": prediction set larger than k");
    }
  }
}

LabeledRun make_run(const Corpus& corpus, const Taxonomy& taxonomy, double tau, int k,
                    const PredictionRun* predictions) {
  LabeledRun run;
  run.taxonomy_id = taxonomy.id();
  run.leaf_labels = taxonomy.leaf_labels();
  run.tau = tau;
  run.k = k;

  std::unordered_map<std::string, const InstancePrediction*> by_id;
  if (predictions) {
    for (const auto& p : predictions->instances) by_id.emplace(p.instance_id, &p);
  }
  for (const auto& inst : corpus.instances) {
    auto it = inst.gold.find(taxonomy.id());
    if (it == inst.gold.end()) {
      throw ValidationError("instance " + inst.id + ": no gold label for taxonomy " + taxonomy.id());
    }
    auto gold = taxonomy.resolve_label(it->second);
    if (!gold) {
      throw ValidationError("instance " + inst.id + ": gold label \"" + it->second +
                            "\" is neither a leaf of " + taxonomy.id() + " nor \"Other\"");
    }
    RunItem item{inst.id, std::move(*gold), std::nullopt};
    if (auto p = by_id.find(inst.id); p != by_id.end()) item.prediction = p->second->aggregated;
    run.items.push_back(std::move(item));
  }
  std::sort(run.items.begin(), run.items.end(),
            [](const RunItem& a, const RunItem& b) { return a.instance_id < b.instance_id; });
  return run;
}

std::size_t overlap(const PredictionSet& set, double tau) {
  return static_cast<std::size_t>(std::count_if(set.entries.begin(), set.entries.end(),
                                                [&](const Prediction& p) { return p.confidence > tau; }));
}

double exclusivity(const LabeledRun& run) {
  if (run.k < 2) throw ValidationError("k must be at least 2");
  std::vector<const PredictionSet*> sets;
  for (const auto& item : run.items) {
    if (item.prediction) sets.push_back(&*item.prediction);
  }
  if (sets.empty()) throw ValidationError("exclusivity needs at least one predicted instance");

  // Column-major confidences, one column per rank; missing ranks can never
  // exceed tau.
  const std::size_t n = sets.size();
  const auto k = static_cast<std::size_t>(run.k);
  std::vector<double> column(n);
  std::vector<std::uint32_t> counts(n, 0);
  const auto& kern = kernels::active();
  for (std::size_t rank = 0; rank < k; ++rank) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& e = sets[i]->entries;
      column[i] = rank < e.size() ? e[rank].confidence : -std::numeric_limits<double>::infinity();
    }
    kern.count_above(column.data(), n, run.tau, counts.data());
  }
  const kernels::OverlapTally t = kern.tally_overlaps(counts.data(), n);
  const double per_instance_sum =
      static_cast<double>(t.covered) - static_cast<double>(t.excess) / static_cast<double>(run.k - 1);
  return per_instance_sum / static_cast<double>(n);
}

double coverage(const LabeledRun& run) {
  if (run.items.empty()) throw ValidationError("coverage needs at least one instance");
  const auto defined = std::count_if(run.items.begin(), run.items.end(),
                                     [](const RunItem& it) { return it.gold != kOtherLabel; });
  return static_cast<double>(defined) / static_cast<double>(run.items.size());
}

double balance(const LabeledRun& run) {
  if (run.leaf_labels.size() < 2) throw ValidationError("balance needs m >= 2");
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < run.leaf_labels.size(); ++i) index.emplace(run.leaf_labels[i], i);
  std::vector<std::uint64_t> counts(run.leaf_labels.size(), 0);
  std::uint64_t defined = 0;
  for (const auto& item : run.items) {
    if (item.gold == kOtherLabel) continue;
    auto it = index.find(item.gold);
    if (it == index.end()) throw ValidationError("gold label \"" + item.gold + "\" is not a class");
    ++counts[it->second];
    ++defined;
  }
  if (defined == 0) throw ValidationError("balance is undefined when every gold label is \"Other\"");
  const double h = kernels::entropy_nats(counts);
  return h / std::log(static_cast<double>(run.leaf_labels.size())) + 0.0;
}

double micro_f1(const LabeledRun& run) {
  std::uint64_t n = 0, tp = 0;
  for (const auto& item : run.items) {
    if (!item.prediction) continue;
    ++n;
    const Prediction* top = item.prediction->top();
    if (top && top->label == item.gold) ++tp;
  }
  if (n == 0) throw ValidationError("micro F1 needs at least one predicted instance");
  // One gold and one predicted label per instance: FP = FN = n - tp, and
  // 2PR / (P + R) reduces to 2TP / (2TP + FP + FN).
  const std::uint64_t errors = n - tp;
  if (tp == 0) return 0.0;
  return static_cast<double>(2 * tp) / static_cast<double>(2 * tp + 2 * errors);
}

std::vector<ClassScore> per_class_scores(const LabeledRun& run) {
  const std::size_t m = run.leaf_labels.size();
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < m; ++i) index.emplace(run.leaf_labels[i], i);

  std::vector<std::uint32_t> tp(m, 0), fp(m, 0), fn(m, 0);
  std::size_t n = 0;
  for (const auto& item : run.items) {
    if (!item.prediction) continue;
    ++n;
    const Prediction* top = item.prediction->top();
    const std::string_view pred = top ? std::string_view(top->label) : std::string_view();
    auto g = index.find(item.gold);
    auto p = index.find(pred);
    if (pred == item.gold) {
      if (g != index.end()) ++tp[g->second];
      continue;
    }
    if (g != index.end()) ++fn[g->second];
    if (p != index.end()) ++fp[p->second];
  }
  if (n == 0) throw ValidationError("per-class scores need at least one predicted instance");

  std::vector<double> precision(m), recall(m), f1(m);
  kernels::active().f1_from_counts(tp.data(), fp.data(), fn.data(), m, precision.data(),
                                   recall.data(), f1.data());
  std::vector<ClassScore> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    out[i] = {run.leaf_labels[i], precision[i], recall[i], f1[i], std::size_t{tp[i]} + fn[i]};
  }
  return out;
}

double macro_f1(const LabeledRun& run) {
  const auto scores = per_class_scores(run);
  double sum = 0.0;
  for (const auto& s : scores) sum += s.f1;
  return sum / static_cast<double>(scores.size());
}

double cohens_kappa(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() != b.size()) throw ValidationError("kappa needs label sequences of equal length");
  if (a.empty()) throw ValidationError("kappa needs at least one label pair");
  std::map<std::string_view, std::pair<std::int64_t, std::int64_t>> marginals;
  std::int64_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++marginals[a[i]].first;
    ++marginals[b[i]].second;
    if (a[i] == b[i]) ++agree;
  }
  // kappa = (p_o - p_e) / (1 - p_e), scaled by n^2 to stay in integers.
  const auto n = static_cast<std::int64_t>(a.size());
  std::int64_t chance = 0;
  for (const auto& [label, c] : marginals) chance += c.first * c.second;
  const std::int64_t denom = n * n - chance;
  if (denom == 0) return 1.0;
  return static_cast<double>(n * agree - chance) / static_cast<double>(denom);
}

MetricReport evaluate_run(const LabeledRun& run, std::string taxonomy_name, std::size_t excluded) {
  run.validate();
  MetricReport r;
  r.taxonomy_id = run.taxonomy_id;
  r.taxonomy_name = std::move(taxonomy_name);
  r.m = run.leaf_labels.size();
  r.instances = run.items.size();
  r.excluded = excluded;
  r.scores.coverage = coverage(run);
  r.scores.balance = balance(run);
  if (run.predicted_count() > 0) {
    r.scores.exclusivity = exclusivity(run);
    r.per_class = per_class_scores(run);
    double sum = 0.0;
    for (const auto& s : r.per_class) sum += s.f1;
    r.scores.macro_f1 = sum / static_cast<double>(r.per_class.size());
    r.scores.micro_f1 = micro_f1(run);
  }
  return r;
}

}  // namespace taxeval
