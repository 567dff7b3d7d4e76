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
#include <cstdio>
#include <sstream>

#include "taxeval/llm.hpp"

namespace taxeval {

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h ^ 0xff;  // field terminator
}

class SplitMix {
 public:
  explicit SplitMix(std::uint64_t state) : state_(state) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Uniform in [0, n).
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(unit() * static_cast<double>(n)); }

 private:
  std::uint64_t state_;
};

std::string cents(int c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "0.%02d", c);
  return buf;
}

}  // namespace

MockBackend::MockBackend(const Taxonomy& taxonomy, const EvalConfig& config)
    : labels_(taxonomy.leaf_labels()),
      seed_(config.seed),
      k_(config.k),
      ambiguity_rate_(config.backend.ambiguity_rate),
      malformed_rate_(config.backend.malformed_rate) {
  labels_.emplace_back(kOtherLabel);
}

std::string MockBackend::generate(const GenerationRequest& request) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed_;
  h = fnv1a(h, request.taxonomy_id);
  h = fnv1a(h, request.instance_id);
  h = fnv1a(h, std::to_string(request.sample_index));
  h = fnv1a(h, std::to_string(request.attempt));
  SplitMix rng(h);

  if (rng.unit() < malformed_rate_) return "I am not sure which category applies here.";

  std::vector<std::string> pool = labels_;
  std::string gold = request.gold_label;
  auto g = std::find(pool.begin(), pool.end(), gold);
  if (g == pool.end()) {
    gold = pool[rng.below(pool.size())];
    g = std::find(pool.begin(), pool.end(), gold);
  }
  pool.erase(g);

  std::vector<std::pair<int, std::string>> lines;  // (cents, label)
  const int gold_cents = 75 + static_cast<int>(rng.below(25));
  lines.emplace_back(gold_cents, gold);

  const bool ambiguous = rng.unit() < ambiguity_rate_;
  const auto distractors = std::min(pool.size(), static_cast<std::size_t>(k_ - 1));
  for (std::size_t i = 0; i < distractors; ++i) {
    std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
    int c = 1 + static_cast<int>(rng.below(29));
    if (i == 0 && ambiguous) c = 71 + static_cast<int>(rng.below(static_cast<std::size_t>(gold_cents - 71)));
    lines.emplace_back(c, pool[i]);
  }
  std::sort(lines.begin(), lines.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });

  std::ostringstream out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out << i + 1 << ". " << lines[i].second << " | " << cents(lines[i].first) << "\n";
  }
  return out.str();
}

}  // namespace taxeval
