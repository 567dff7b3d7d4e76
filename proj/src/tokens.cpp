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

#include "taxeval/corpus.hpp"
#include "taxeval/error.hpp"

namespace taxeval {

Tokens tokenize(std::string_view text) {
  Tokens out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto b = text.find_first_not_of(" \t\r\n", pos);
    if (b == std::string_view::npos) break;
    auto e = text.find_first_of(" \t\r\n", b);
    if (e == std::string_view::npos) e = text.size();
    out.emplace_back(text.substr(b, e - b));
    pos = e;
  }
  return out;
}

std::string join(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

void check_edits(const Tokens& source, std::span<const Edit> edits) {
  const Edit* prev = nullptr;
  for (const Edit& e : edits) {
    if (e.start > e.end || e.end > source.size()) {
      throw EditError("edit span [" + std::to_string(e.start) + ", " + std::to_string(e.end) +
                      ") out of range for " + std::to_string(source.size()) + " tokens");
    }
    if (std::equal(source.begin() + e.start, source.begin() + e.end, e.replacement.begin(),
                   e.replacement.end())) {
      throw EditError("edit [" + std::to_string(e.start) + ", " + std::to_string(e.end) +
                      ") does not change the source");
    }
    if (prev) {
      const bool unsorted = std::pair(e.start, e.end) < std::pair(prev->start, prev->end);
      const bool both_insert_here =
          prev->start == prev->end && e.start == e.end && e.start == prev->start;
      if (unsorted) throw EditError("edits are not sorted by span");
      if (e.start < prev->end || both_insert_here) {
        throw EditError("edits [" + std::to_string(prev->start) + ", " + std::to_string(prev->end) +
                        ") and [" + std::to_string(e.start) + ", " + std::to_string(e.end) +
                        ") overlap");
      }
    }
    prev = &e;
  }
}

Tokens apply_edits(const Tokens& source, std::span<const Edit> edits) {
  check_edits(source, edits);
  Tokens out;
  out.reserve(source.size());
  std::size_t cursor = 0;
  for (const Edit& e : edits) {
    out.insert(out.end(), source.begin() + cursor, source.begin() + e.start);
    out.insert(out.end(), e.replacement.begin(), e.replacement.end());
    cursor = e.end;
  }
  out.insert(out.end(), source.begin() + cursor, source.end());
  return out;
}

}  // namespace taxeval
