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

#include <cmath>

#include "taxeval/kernels.hpp"

namespace taxeval::kernels {

namespace {

void count_above(const double* column, std::size_t n, double tau, std::uint32_t* counts) {
  for (std::size_t i = 0; i < n; ++i) counts[i] += column[i] > tau ? 1u : 0u;
}

OverlapTally tally_overlaps(const std::uint32_t* counts, std::size_t n) {
  OverlapTally t;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    t.covered += counts[i] > 0 ? 1u : 0u;
    total += counts[i];
  }
  t.excess = total - t.covered;
  return t;
}

void add_into(double* acc, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += x[i];
}

void divide(double* x, std::size_t n, double divisor) {
  for (std::size_t i = 0; i < n; ++i) x[i] /= divisor;
}

void f1_from_counts(const std::uint32_t* tp, const std::uint32_t* fp, const std::uint32_t* fn,
                    std::size_t n, double* precision, double* recall, double* f1) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = tp[i];
    const double pred = t + static_cast<double>(fp[i]);
    const double gold = t + static_cast<double>(fn[i]);
    const double p = pred > 0.0 ? t / pred : 0.0;
    const double r = gold > 0.0 ? t / gold : 0.0;
    const double s = p + r;
    precision[i] = p;
    recall[i] = r;
    f1[i] = s > 0.0 ? 2.0 * p * r / s : 0.0;
  }
}

}  // namespace

namespace scalar {
const KernelTable kTable{Isa::Scalar, count_above, tally_overlaps, add_into, divide, f1_from_counts};
}  // namespace scalar

double entropy_nats(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  std::uint64_t first = 0;
  std::size_t nonzero = 0;
  bool even = true;
  for (auto c : counts) {
    total += c;
    if (c == 0) continue;
    if (nonzero++ == 0) first = c;
    even = even && c == first;
  }
  if (total == 0) return 0.0;
  // Equal counts: exactly ln(nonzero).
  if (even) return std::log(static_cast<double>(nonzero));
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace taxeval::kernels
