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

#include <sstream>
#include <span>

#include "taxeval/llm.hpp"

namespace taxeval {

namespace {

std::string highlight(const SingleErrorInstance& inst) {
  const auto& e = inst.edit;
  const std::span<const std::string> src(inst.source);
  Tokens out(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(e.start));
  out.push_back("[-" + join(src.subspan(e.start, e.end - e.start)) + "-]{+" + join(e.replacement) +
                "+}");
  out.insert(out.end(), src.begin() + static_cast<std::ptrdiff_t>(e.end), src.end());
  return join(out);
}

std::string one_line(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (c == '\n' || c == '\r' || c == '\t' || c == ' ') {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

}  // namespace

std::string build_prompt(const SingleErrorInstance& instance, const Taxonomy& taxonomy, int k) {
  std::ostringstream p;
  p << "You are an expert annotator of grammatical errors in English learner writing.\n"
    << "The sentence below contains exactly one error; the correction is shown.\n\n"
    << "Original:  " << join(instance.source) << "\n"
    << "Corrected: " << join(instance.target) << "\n"
    << "Edit:      " << highlight(instance) << "\n\n"
    << "Error types (" << taxonomy.name() << "):\n";
  for (const ErrorType* leaf : taxonomy.leaf_types()) {
    p << "- " << leaf->code << ": " << one_line(leaf->name);
    const auto def = one_line(leaf->definition);
    if (!def.empty() && def != one_line(leaf->name)) p << ". " << def;
    if (!leaf->edit_ops.empty()) {
      p << " [";
      for (std::size_t i = 0; i < leaf->edit_ops.size(); ++i) {
        if (i) p << '/';
        p << edit_op_tag(leaf->edit_ops[i]);
      }
      p << ']';
    }
    p << "\n";
  }
  p << "- " << kOtherLabel << ": the error fits none of the types above\n\n"
    << "Give the top " << k << " distinct error types for this edit, most likely first, each with "
    << "your confidence between 0 and 1. Answer with exactly " << k
    << " lines and nothing else, in the form:\n";
  for (int i = 1; i <= k; ++i) p << i << ". <code> | <confidence>\n";
  return p.str();
}

}  // namespace taxeval
