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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle/oracle.hpp"
#include "support.hpp"
#include "taxeval/error.hpp"
#include "taxeval/metrics.hpp"

using namespace taxeval;

namespace {

PredictionSet confidences(std::vector<double> c) {
  PredictionSet s;
  for (std::size_t i = 0; i < c.size(); ++i) s.entries.push_back({"C" + std::to_string(i), c[i]});
  s.normalize();
  return s;
}

LabeledRun run_of(std::vector<std::string> leaves, std::vector<std::string> gold,
                  std::vector<std::string> predicted = {}, int k = 3) {
  LabeledRun r;
  r.taxonomy_id = "T";
  r.leaf_labels = std::move(leaves);
  r.k = k;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    RunItem item{"x" + std::to_string(100 + i), gold[i], std::nullopt};
    if (!predicted.empty()) item.prediction = PredictionSet{item.instance_id, {{predicted[i], 0.9}}};
    r.items.push_back(std::move(item));
  }
  return r;
}

LabeledRun overlap_run(const std::vector<std::vector<double>>& sets, int k, double tau = 0.7) {
  LabeledRun r;
  r.taxonomy_id = "T";
  r.leaf_labels = {"C0", "C1", "C2", "C3", "C4"};
  r.k = k;
  r.tau = tau;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    auto s = confidences(sets[i]);
    s.instance_id = "x" + std::to_string(i);
    r.items.push_back({s.instance_id, "C0", s});
  }
  return r;
}

}  // namespace

TEST_CASE("overlap counts strictly above tau") {
  CHECK(overlap(confidences({0.8, 0.75, 0.1}), 0.7) == 2);
  CHECK(overlap(confidences({0.5, 0.3, 0.1}), 0.7) == 0);
  CHECK(overlap(confidences({0.71}), 0.7) == 1);
  CHECK(overlap(confidences({0.7}), 0.7) == 0);
}

TEST_CASE("exclusivity") {
  CHECK(exclusivity(overlap_run({{0.9, 0.1}, {0.8}, {0.75, 0.2, 0.1}}, 3)) == 1.0);
  CHECK(exclusivity(overlap_run({{0.9, 0.8, 0.75}, {0.71, 0.72, 0.73}}, 3)) == 0.0);
  CHECK(exclusivity(overlap_run({{0.1}, {0.5, 0.6}}, 3)) == 0.0);
  // Overlaps {2, 0} with k = 3: (1 - 1/2 + 0) / 2.
  CHECK(exclusivity(overlap_run({{0.8, 0.75, 0.1}, {0.5, 0.3, 0.1}}, 3)) == 0.25);

  auto gold_only = run_of({"A", "B"}, {"A"});
  CHECK_THROWS_AS(exclusivity(gold_only), ValidationError);
  auto k1 = overlap_run({{0.9}}, 3);
  k1.k = 1;
  CHECK_THROWS_AS(exclusivity(k1), ValidationError);
}

TEST_CASE("coverage") {
  CHECK(coverage(run_of({"A", "B"}, {"A", "B", "A"})) == 1.0);
  CHECK(coverage(run_of({"A", "B"}, {"Other", "Other"})) == 0.0);
  std::vector<std::string> gold(487, "A");
  std::fill(gold.begin() + 450, gold.end(), "Other");
  CHECK(coverage(run_of({"A", "B"}, gold)) == 450.0 / 487.0);
  CHECK(coverage(run_of({"A", "B"}, gold)) == doctest::Approx(0.924).epsilon(1e-3));
  CHECK_THROWS_AS(coverage(run_of({"A", "B"}, {})), ValidationError);
}

TEST_CASE("balance") {
  CHECK(balance(run_of({"A", "B", "C"}, {"A", "B", "C", "C", "B", "A"})) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(balance(run_of({"A", "B", "C"}, {"B", "B", "Other"})) == 0.0);
  // m = 4, counts (2, 1, 1, 0): (-0.5 ln 0.5 - 2 * 0.25 ln 0.25) / ln 4 = 0.75.
  CHECK(balance(run_of({"A", "B", "C", "D"}, {"A", "A", "B", "C", "Other"})) ==
        doctest::Approx(0.75).epsilon(1e-15));
  CHECK_THROWS_AS(balance(run_of({"A", "B"}, {"Other"})), ValidationError);
  CHECK_THROWS_AS(balance(run_of({"A"}, {"A"})), ValidationError);
}

TEST_CASE("balance is Schur-concave on random count vectors") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 2 + testing::pick(rng, 8);
    std::vector<std::string> leaves;
    for (std::size_t i = 0; i < m; ++i) leaves.push_back("L" + std::to_string(i));
    std::vector<std::size_t> counts(m);
    for (auto& c : counts) c = testing::pick(rng, 6);
    counts[0] += 1;
    auto to_gold = [&](const std::vector<std::size_t>& cs) {
      std::vector<std::string> g;
      for (std::size_t i = 0; i < m; ++i) g.insert(g.end(), cs[i], leaves[i]);
      return g;
    };
    auto max_it = std::max_element(counts.begin(), counts.end());
    auto min_it = std::min_element(counts.begin(), counts.end());
    if (*max_it - *min_it < 2) continue;
    auto moved = counts;
    --moved[static_cast<std::size_t>(max_it - counts.begin())];
    ++moved[static_cast<std::size_t>(min_it - counts.begin())];
    const double before = balance(run_of(leaves, to_gold(counts)));
    const double after = balance(run_of(leaves, to_gold(moved)));
    CHECK(after > before);

    std::vector<oracle::Item> items;
    for (const auto& g : to_gold(counts)) items.push_back({g, {}});
    CHECK(before == doctest::Approx(oracle::balance(items, leaves)).epsilon(1e-12));

    // Permuting counts across classes changes nothing.
    auto perm = counts;
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(balance(run_of(leaves, to_gold(perm))) == doctest::Approx(before).epsilon(1e-12));
  }
}

TEST_CASE("F1 scores") {
  // gold (A, A, B, B), predicted (A, B, B, B).
  const auto r = run_of({"A", "B"}, {"A", "A", "B", "B"}, {"A", "B", "B", "B"});
  CHECK(micro_f1(r) == 0.75);
  const auto per = per_class_scores(r);
  REQUIRE(per.size() == 2);
  CHECK(per[0].f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(per[1].f1 == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(per[0].precision == 1.0);
  CHECK(per[0].recall == 0.5);
  CHECK(per[1].support == 2);
  CHECK(macro_f1(r) == doctest::Approx((2.0 / 3.0 + 0.8) / 2.0).epsilon(1e-15));

  SUBCASE("absent classes count as zero in the macro mean") {
    const auto all_right = run_of({"A", "B", "C", "D"}, {"A", "A", "B"}, {"A", "A", "B"});
    CHECK(micro_f1(all_right) == 1.0);
    CHECK(macro_f1(all_right) == 0.5);
  }
  SUBCASE("Other is pooled in micro but is not a macro class") {
    const auto r2 = run_of({"A", "B"}, {"Other", "A", "B"}, {"Other", "A", "Other"});
    CHECK(micro_f1(r2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    const auto per2 = per_class_scores(r2);
    REQUIRE(per2.size() == 2);
    CHECK(per2[0].f1 == 1.0);
    CHECK(per2[1].f1 == 0.0);
    CHECK(macro_f1(r2) == 0.5);
  }
  CHECK_THROWS_AS(micro_f1(run_of({"A", "B"}, {"A"})), ValidationError);
  CHECK_THROWS_AS(macro_f1(run_of({"A", "B"}, {"A"})), ValidationError);
}

TEST_CASE("kappa") {
  const std::vector<std::string> a = {"A", "A", "B", "B"}, b = {"A", "B", "A", "B"};
  CHECK(cohens_kappa(a, b) == 0.0);
  CHECK(cohens_kappa(a, a) == 1.0);
  const std::vector<std::string> same = {"A", "A", "A"};
  CHECK(cohens_kappa(same, same) == 1.0);
  const std::vector<std::string> flipped = {"B", "B", "A", "A"};
  CHECK(cohens_kappa(a, flipped) == -1.0);
  CHECK_THROWS_AS(cohens_kappa(a, same), ValidationError);
  CHECK_THROWS_AS(cohens_kappa(std::vector<std::string>{}, std::vector<std::string>{}), ValidationError);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + testing::pick(rng, 50);
    std::vector<std::string> x, y;
    for (std::size_t i = 0; i < n; ++i) {
      x.push_back(std::string(1, static_cast<char>('A' + testing::pick(rng, 4))));
      y.push_back(testing::unit(rng) < 0.6 ? x.back() : std::string(1, static_cast<char>('A' + testing::pick(rng, 4))));
    }
    const double k = cohens_kappa(x, y);
    CHECK(k == doctest::Approx(oracle::kappa(x, y)).epsilon(1e-12));
    CHECK(k <= 1.0);
    CHECK(k >= -1.0);
    CHECK(k == cohens_kappa(y, x));
  }
}

TEST_CASE("metrics agree with the brute-force oracle") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + testing::pick(rng, 29);
    const std::size_t n = 1 + testing::pick(rng, 200);
    const int k = 2 + static_cast<int>(testing::pick(rng, 4));
    const double tau = std::vector<double>{0.5, 0.7, 0.9}[testing::pick(rng, 3)];
    const auto s = testing::random_run(rng, m, n, k, tau);
    CAPTURE(trial);
    CHECK(exclusivity(s.run) == doctest::Approx(oracle::exclusivity(s.items, tau, k)).epsilon(1e-12));
    CHECK(coverage(s.run) == doctest::Approx(oracle::coverage(s.items)).epsilon(1e-12));
    CHECK(balance(s.run) == doctest::Approx(oracle::balance(s.items, s.leaves)).epsilon(1e-12));
    CHECK(micro_f1(s.run) == doctest::Approx(oracle::micro_f1(s.items)).epsilon(1e-12));
    CHECK(macro_f1(s.run) == doctest::Approx(oracle::macro_f1(s.items, s.leaves)).epsilon(1e-12));
  }
}

TEST_CASE("metric routing and ordering invariants") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = testing::random_run(rng, 6, 40, 3, 0.7);
    const double cov = coverage(s.run);
    const double exc = exclusivity(s.run);

    auto shuffled = s.run;
    std::shuffle(shuffled.items.begin(), shuffled.items.end(), rng);
    CHECK(exclusivity(shuffled) == doctest::Approx(exc).epsilon(1e-12));
    CHECK(coverage(shuffled) == cov);

    auto new_preds = s.run;
    for (auto& item : new_preds.items) item.prediction = PredictionSet{item.instance_id, {{"C1", 0.99}}};
    CHECK(coverage(new_preds) == cov);

    auto new_gold = s.run;
    for (auto& item : new_gold.items) item.gold = testing::unit(rng) < 0.5 ? "Other" : "C2";
    CHECK(exclusivity(new_gold) == exc);

    // Raising the overlap of an instance that already has one never raises exclusivity.
    if (overlap(*s.run.items[0].prediction, 0.7) == 0) continue;
    auto more = s.run;
    auto& e = more.items[0].prediction->entries;
    for (auto& p : e) p.confidence = 0.95;
    CHECK(exclusivity(more) <= exc + 1e-15);
  }
}

TEST_CASE("run validation and evaluation") {
  auto r = run_of({"A", "B"}, {"A", "B"}, {"A", "A"});
  CHECK_NOTHROW(r.validate());
  auto dup = r;
  dup.items[1].instance_id = dup.items[0].instance_id;
  CHECK_THROWS_AS(dup.validate(), ValidationError);
  auto unknown = r;
  unknown.items[0].gold = "Z";
  CHECK_THROWS_AS(unknown.validate(), ValidationError);
  auto big = r;
  big.k = 2;
  big.items[0].prediction->entries = {{"A", 0.9}, {"B", 0.5}, {"Other", 0.1}};
  CHECK_THROWS_AS(big.validate(), ValidationError);

  const auto report = evaluate_run(r, "Test", 3);
  CHECK(report.m == 2);
  CHECK(report.instances == 2);
  CHECK(report.excluded == 3);
  CHECK(report.scores.exclusivity == 1.0);
  CHECK(report.scores.micro_f1 == 0.5);
  CHECK(report.per_class.size() == 2);

  const auto gold_only = evaluate_run(run_of({"A", "B"}, {"A", "B"}), "Test");
  CHECK_FALSE(gold_only.scores.exclusivity);
  CHECK_FALSE(gold_only.scores.macro_f1);
  CHECK(gold_only.scores.balance == 1.0);
  CHECK(gold_only.per_class.empty());
}

TEST_CASE("make_run joins corpus gold with predictions") {
  const auto bry = Taxonomy::load_file(testing::taxonomy_path("bry17"));
  Corpus c;
  for (const char* id : {"b", "a", "c"}) {
    SingleErrorInstance inst;
    inst.id = id;
    inst.source = tokenize("x y");
    inst.edit = {0, 1, {"z"}, ""};
    inst.target = tokenize("z y");
    inst.gold = {{"BRY17", "R:NOUN:NUM"}};
    c.instances.push_back(inst);
  }
  PredictionRun p;
  p.instances.push_back({"a", PredictionSet{"a", {{"NOUN:NUM", 0.9}}}, {}});
  p.instances.push_back({"c", std::nullopt, {}});
  const auto run = make_run(c, bry, 0.7, 3, &p);
  REQUIRE(run.items.size() == 3);
  CHECK(run.items[0].instance_id == "a");
  CHECK(run.items[0].gold == "NOUN:NUM");
  CHECK(run.items[0].prediction);
  CHECK_FALSE(run.items[1].prediction);
  CHECK_FALSE(run.items[2].prediction);
  CHECK(run.predicted_count() == 1);
  CHECK(run.leaf_labels == bry.leaf_labels());

  c.instances[0].gold = {{"POL73", "1.1"}};
  CHECK_THROWS_AS(make_run(c, bry, 0.7, 3), ValidationError);
}
