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
#include <cstdint>
#include <optional>

#include "taxeval/corpus.hpp"
#include "taxeval/error.hpp"

namespace taxeval {

namespace {

enum class Op : std::uint8_t { Match, Substitute, Delete, Insert };

}  // namespace

std::vector<Edit> extract_edits(const Tokens& source, const Tokens& target) {
  const std::size_t n = source.size();
  const std::size_t m = target.size();
  const std::size_t width = m + 1;

  // cost[i * width + j]: distance between source[0, i) and target[0, j).
  std::vector<std::uint32_t> cost((n + 1) * width);
  for (std::size_t i = 0; i <= n; ++i) cost[i * width] = static_cast<std::uint32_t>(i);
  for (std::size_t j = 0; j <= m; ++j) cost[j] = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::uint32_t diag = cost[(i - 1) * width + j - 1] + (source[i - 1] == target[j - 1] ? 0 : 1);
      const std::uint32_t up = cost[(i - 1) * width + j] + 1;
      const std::uint32_t left = cost[i * width + j - 1] + 1;
      cost[i * width + j] = std::min({diag, up, left});
    }
  }

  std::vector<Op> ops;
  ops.reserve(n + m);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::uint32_t here = cost[i * width + j];
    if (i > 0 && j > 0) {
      const std::uint32_t diag = cost[(i - 1) * width + j - 1];
      if (source[i - 1] == target[j - 1] && diag == here) {
        ops.push_back(Op::Match);
        --i, --j;
        continue;
      }
      if (source[i - 1] != target[j - 1] && diag + 1 == here) {
        ops.push_back(Op::Substitute);
        --i, --j;
        continue;
      }
    }
    if (i > 0 && cost[(i - 1) * width + j] + 1 == here) {
      ops.push_back(Op::Delete);
      --i;
      continue;
    }
    ops.push_back(Op::Insert);
    --j;
  }
  std::reverse(ops.begin(), ops.end());

  std::vector<Edit> edits;
  std::size_t si = 0, tj = 0;
  bool open = false;
  for (Op op : ops) {
    if (op == Op::Match) {
      open = false;
      ++si, ++tj;
      continue;
    }
    if (!open) {
      edits.push_back(Edit{si, si, {}, {}});
      open = true;
    }
    Edit& e = edits.back();
    if (op == Op::Substitute || op == Op::Delete) e.end = ++si;
    if (op == Op::Substitute || op == Op::Insert) e.replacement.push_back(target[tj++]);
  }
  return edits;
}

namespace {

// Instance keeping edit i of `sentence` with every other edit applied, or
// nullopt when that edit does not survive as one contiguous extracted edit.
std::optional<SingleErrorInstance> isolate(const MultiEditSentence& sentence, const Tokens& target,
                                           std::size_t i) {
  std::vector<Edit> others;
  others.reserve(sentence.edits.size() - 1);
  for (std::size_t k = 0; k < sentence.edits.size(); ++k) {
    if (k != i) others.push_back(sentence.edits[k]);
  }
  SingleErrorInstance inst;
  inst.id = sentence.id + "-e" + std::to_string(i + 1);
  inst.source = apply_edits(sentence.source, others);
  inst.target = target;

  auto extracted = extract_edits(inst.source, inst.target);
  if (extracted.size() != 1) return std::nullopt;
  // Taking the extracted edit shrinks padded M2 spans ("x y" -> "x z") to
  // their minimal form.
  inst.edit = std::move(extracted.front());
  inst.edit.type_hint = sentence.edits[i].type_hint;
  return inst;
}

}  // namespace

std::vector<SingleErrorInstance> decompose(const MultiEditSentence& sentence) {
  if (sentence.edits.empty()) {
    throw EditError("sentence " + sentence.id + " has no edits to decompose");
  }
  const Tokens target = apply_edits(sentence.source, sentence.edits);
  std::vector<SingleErrorInstance> out;
  out.reserve(sentence.edits.size());
  for (std::size_t i = 0; i < sentence.edits.size(); ++i) {
    auto inst = isolate(sentence, target, i);
    if (!inst) {
      throw EditError("sentence " + sentence.id + ": edit " + std::to_string(i + 1) +
                      " does not reduce to a single contiguous edit");
    }
    out.push_back(std::move(*inst));
  }
  return out;
}

std::vector<SingleErrorInstance> decompose_all(std::span<const MultiEditSentence> sentences,
                                               DecomposeStats* stats) {
  DecomposeStats local;
  std::vector<SingleErrorInstance> out;
  for (const auto& s : sentences) {
    ++local.sentences;
    if (s.edits.empty()) {
      ++local.noop_sentences;
      continue;
    }
    const Tokens target = apply_edits(s.source, s.edits);
    for (std::size_t i = 0; i < s.edits.size(); ++i) {
      if (auto inst = isolate(s, target, i)) {
        out.push_back(std::move(*inst));
      } else {
        ++local.rejected_edits;
      }
    }
  }
  local.instances = out.size();
  if (stats) *stats = local;
  return out;
}

}  // namespace taxeval
