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
#include <optional>

#include "taxeval/corpus.hpp"
#include "taxeval/error.hpp"
#include "text_util.hpp"

namespace taxeval {

namespace {

constexpr std::string_view kFieldSep = "|||";
constexpr std::string_view kNone = "-NONE-";
constexpr std::string_view kNoop = "noop";

long long parse_int(std::string_view s, std::size_t line, const char* what) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, std::string("non-integer ") + what + " \"" + std::string(s) + "\"");
  }
  return v;
}

struct Block {
  std::size_t line = 0;
  MultiEditSentence sentence;
};

void finish(Block& block, std::vector<MultiEditSentence>& out) {
  auto& edits = block.sentence.edits;
  std::stable_sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) {
    return std::pair(a.start, a.end) < std::pair(b.start, b.end);
  });
  try {
    check_edits(block.sentence.source, edits);
  } catch (const EditError& e) {
    throw ParseError(block.line, e.what());
  }
  out.push_back(std::move(block.sentence));
}

}  // namespace

std::vector<MultiEditSentence> parse_m2(std::string_view text, const M2Options& options) {
  std::vector<MultiEditSentence> out;
  std::optional<Block> block;
  std::size_t line_no = 0;
  for (std::string_view line : text::split_lines(text)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      if (block) {
        finish(*block, out);
        block.reset();
      }
      continue;
    }
    if (line.starts_with("S ") || line == "S") {
      if (block) finish(*block, out);
      block.emplace();
      block->line = line_no;
      block->sentence.id = "s" + std::to_string(out.size() + 1);
      block->sentence.source = tokenize(line.substr(1));
      continue;
    }
    if (!line.starts_with("A ")) throw ParseError(line_no, "expected an S or A line");
    if (!block) throw ParseError(line_no, "annotation before any sentence");

    auto fields = text::split(line.substr(2), kFieldSep);
    if (fields.size() != 6) {
      throw ParseError(line_no, "annotation has " + std::to_string(fields.size()) +
                                    " fields, expected 6");
    }
    auto span = tokenize(fields[0]);
    if (span.size() != 2) throw ParseError(line_no, "annotation span needs start and end");
    const long long annotator = parse_int(text::trim(fields[5]), line_no, "annotator id");
    const long long start = parse_int(span[0], line_no, "span start");
    const long long end = parse_int(span[1], line_no, "span end");
    if (annotator != options.annotator) continue;

    const std::string_view type = fields[1];
    const std::string_view replacement = fields[2];
    if (type == kNoop) continue;

    const auto n = static_cast<long long>(block->sentence.source.size());
    if (start < 0 || end < start || end > n) {
      throw ParseError(line_no, "span " + std::to_string(start) + " " + std::to_string(end) +
                                    " out of range for " + std::to_string(n) + " tokens");
    }
    Edit e;
    e.start = static_cast<std::size_t>(start);
    e.end = static_cast<std::size_t>(end);
    if (replacement != kNone) e.replacement = tokenize(replacement);
    e.type_hint = std::string(type);
    block->sentence.edits.push_back(std::move(e));
  }
  if (block) finish(*block, out);
  return out;
}

std::string render_m2(std::span<const MultiEditSentence> sentences, int annotator) {
  std::string out;
  const std::string tail = "|||REQUIRED|||-NONE-|||" + std::to_string(annotator) + "\n";
  for (const auto& s : sentences) {
    out += "S " + join(s.source) + "\n";
    if (s.edits.empty()) {
      out += "A -1 -1|||noop|||-NONE-" + tail;
    }
    for (const auto& e : s.edits) {
      out += "A " + std::to_string(e.start) + " " + std::to_string(e.end) + "|||" +
             (e.type_hint.empty() ? std::string("UNK") : e.type_hint) + "|||" + join(e.replacement) +
             tail;
    }
    out += "\n";
  }
  return out;
}

}  // namespace taxeval
