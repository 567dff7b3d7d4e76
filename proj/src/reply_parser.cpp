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
#include <charconv>
#include <map>

#include "taxeval/error.hpp"
#include "taxeval/llm.hpp"
#include "text_util.hpp"

namespace taxeval {

namespace {

constexpr std::string_view kAsciiSeparators = " \t|:,;-=(*";

bool ends_with_ci(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && text::to_lower(s.substr(s.size() - suffix.size())) == suffix;
}

// Drops separators, dashes and a trailing "confidence" word from the end of
// the label part.
std::string_view strip_label_tail(std::string_view s) {
  while (true) {
    const auto before = s.size();
    while (!s.empty() && kAsciiSeparators.find(s.back()) != std::string_view::npos) s.remove_suffix(1);
    for (std::string_view dash : {"—", "–"}) {
      if (s.ends_with(dash)) s.remove_suffix(dash.size());
    }
    for (std::string_view word : {"confidence", "conf"}) {
      if (ends_with_ci(s, word)) s.remove_suffix(word.size());
    }
    if (s.size() == before) return s;
  }
}

std::string_view strip_rank(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  for (std::string_view bullet : {"- ", "* ", "• "}) {
    if (s.starts_with(bullet)) return s.substr(bullet.size());
  }
  std::size_t i = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i > 0 && i + 1 < s.size() && (s[i] == '.' || s[i] == ')') && s[i + 1] == ' ') {
    return s.substr(i + 2);
  }
  return s;
}

struct Parsed {
  std::string label;
  double confidence;
};

std::optional<Parsed> parse_line(std::string_view line, const Taxonomy& taxonomy) {
  const std::string trimmed = text::trim(line);
  std::string_view s = strip_rank(trimmed);
  while (!s.empty() && std::string_view(" \t)].*").find(s.back()) != std::string_view::npos) {
    s.remove_suffix(1);
  }
  bool percent = false;
  if (s.ends_with('%')) {
    percent = true;
    s.remove_suffix(1);
  }
  std::size_t b = s.size();
  while (b > 0 && (std::isdigit(static_cast<unsigned char>(s[b - 1])) || s[b - 1] == '.')) --b;
  if (b == s.size() || b == 0) return std::nullopt;
  const char sep = s[b - 1];
  if (kAsciiSeparators.find(sep) == std::string_view::npos && !(sep & 0x80)) return std::nullopt;

  const std::string_view number = s.substr(b);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), v);
  if (ec != std::errc() || ptr != number.data() + number.size()) return std::nullopt;
  if (percent || v > 1.0) {
    if (v > 100.0) return std::nullopt;
    v /= 100.0;
  }

  auto label = taxonomy.match_label(strip_label_tail(s.substr(0, b)));
  if (!label) return std::nullopt;
  return Parsed{std::move(*label), v};
}

}  // namespace

void PredictionSet::normalize() {
  std::sort(entries.begin(), entries.end(), [](const Prediction& a, const Prediction& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    return a.label < b.label;
  });
}

std::optional<PredictionSet> parse_reply(std::string_view text, const Taxonomy& taxonomy, int k) {
  std::map<std::string, double> best;
  for (auto line : text::split_lines(text)) {
    auto p = parse_line(line, taxonomy);
    if (!p) continue;
    auto [it, inserted] = best.emplace(p->label, p->confidence);
    if (!inserted) it->second = std::max(it->second, p->confidence);
  }
  if (best.empty()) return std::nullopt;
  PredictionSet set;
  for (auto& [label, conf] : best) set.entries.push_back({label, conf});
  set.normalize();
  if (set.entries.size() > static_cast<std::size_t>(k)) set.entries.resize(static_cast<std::size_t>(k));
  return set;
}

void EvalConfig::validate() const {
  if (!(tau > 0.0 && tau < 1.0)) throw ValidationError("tau must lie in (0, 1)");
  if (k < 2) throw ValidationError("top-k must be at least 2");
  if (samples < 1) throw ValidationError("samples must be at least 1");
  if (!(temperature >= 0.0)) throw ValidationError("temperature must be non-negative");
  if (max_parallel < 1) throw ValidationError("max-parallel must be at least 1");
  if (max_attempts < 1) throw ValidationError("max-attempts must be at least 1");
  if (!(backend.ambiguity_rate >= 0.0 && backend.ambiguity_rate <= 1.0)) {
    throw ValidationError("ambiguity rate must lie in [0, 1]");
  }
  if (!(backend.malformed_rate >= 0.0 && backend.malformed_rate <= 1.0)) {
    throw ValidationError("malformed rate must lie in [0, 1]");
  }
  if (backend.kind == BackendKind::Http && backend.endpoint.empty()) {
    throw ValidationError("the http backend needs an endpoint");
  }
}

}  // namespace taxeval
