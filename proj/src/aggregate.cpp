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
#include <map>
#include <numeric>

#include "taxeval/error.hpp"
#include "taxeval/kernels.hpp"
#include "taxeval/llm.hpp"

namespace taxeval {

PredictionSet aggregate_avg_conf(std::span<const PredictionSet> sets, int k) {
  if (sets.empty()) throw ValidationError("Avg-Conf needs at least one prediction set");
  if (k < 1) throw ValidationError("k must be positive");

  std::map<std::string, std::size_t> column;
  for (const auto& s : sets) {
    for (const auto& e : s.entries) column.emplace(e.label, 0);
  }
  std::size_t next = 0;
  for (auto& [label, idx] : column) idx = next++;

  // Summation runs in a canonical set order so the result does not depend on
  // the order samples arrived in.
  std::vector<std::size_t> order(sets.size());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](std::size_t i) {
    std::vector<std::pair<std::string_view, double>> v;
    for (const auto& e : sets[i].entries) v.emplace_back(e.label, e.confidence);
    return v;
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

  const auto& kern = kernels::active();
  const std::size_t n = column.size();
  std::vector<double> acc(n, 0.0), row(n), peak(n, 0.0);
  for (std::size_t i : order) {
    std::fill(row.begin(), row.end(), 0.0);
    for (const auto& e : sets[i].entries) {
      const std::size_t c = column.at(e.label);
      row[c] = e.confidence;
      peak[c] = std::max(peak[c], e.confidence);
    }
    kern.add_into(acc.data(), row.data(), n);
  }
  kern.divide(acc.data(), n, static_cast<double>(sets.size()));

  PredictionSet out;
  out.instance_id = sets.front().instance_id;
  for (const auto& [label, c] : column) out.entries.push_back({label, std::min(acc[c], peak[c])});
  out.normalize();
  if (out.entries.size() > static_cast<std::size_t>(k)) out.entries.resize(static_cast<std::size_t>(k));
  return out;
}

}  // namespace taxeval
