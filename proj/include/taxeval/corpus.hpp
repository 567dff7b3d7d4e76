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

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "taxeval/taxonomy.hpp"

namespace taxeval {

/// Pre-tokenised text; tokens are separated by single spaces on disk.
using Tokens = std::vector<std::string>;

Tokens tokenize(std::string_view text);
std::string join(std::span<const std::string> tokens);

/// Replaces source tokens [start, end) with `replacement`. start == end is an
/// insertion before token `start`.
struct Edit {
  std::size_t start = 0;
  std::size_t end = 0;
  Tokens replacement;
  std::string type_hint;  // M2 error-type field, passed through untouched

  /// Same span and replacement; the type hint is metadata.
  bool same_change(const Edit& other) const {
    return start == other.start && end == other.end && replacement == other.replacement;
  }
  bool operator==(const Edit&) const = default;
};

struct MultiEditSentence {
  std::string id;
  Tokens source;
  std::vector<Edit> edits;  // sorted by start, non-overlapping

  bool operator==(const MultiEditSentence&) const = default;
};

struct SingleErrorInstance {
  std::string id;
  Tokens source;
  Tokens target;
  Edit edit;
  std::map<std::string, std::string> gold;  // taxonomy id -> leaf code or "Other"

  bool operator==(const SingleErrorInstance&) const = default;
};

/// Throws EditError unless `edits` are sorted, pairwise non-overlapping, in
/// range for `source_size`, and none is a no-op against `source`.
void check_edits(const Tokens& source, std::span<const Edit> edits);

Tokens apply_edits(const Tokens& source, std::span<const Edit> edits);

/// Minimal-cost token alignment (unit costs), adjacent non-match operations
/// merged into single edits. Ties prefer match, then substitution, then
/// deletion, tracing back from the end, so edits land as far left as the
/// cost allows.
std::vector<Edit> extract_edits(const Tokens& source, const Tokens& target);

/// One instance per edit: every other edit corrected, edit i left in place.
/// Throws EditError when the sentence has no edits or an edit does not reduce
/// to a single contiguous change in its instance.
std::vector<SingleErrorInstance> decompose(const MultiEditSentence& sentence);

struct DecomposeStats {
  std::size_t sentences = 0;
  std::size_t noop_sentences = 0;
  std::size_t instances = 0;
  std::size_t rejected_edits = 0;  // not isolatable as one contiguous edit
};

/// Lenient bulk form used by the CLI: noop sentences are skipped and
/// non-isolatable edits are dropped and counted.
std::vector<SingleErrorInstance> decompose_all(std::span<const MultiEditSentence> sentences,
                                               DecomposeStats* stats = nullptr);

// ---------------------------------------------------------------------------
// M2

struct M2Options {
  int annotator = 0;
};

/// Parses M2 text. Sentence ids are "s<N>" in file order, starting at 1.
std::vector<MultiEditSentence> parse_m2(std::string_view text, const M2Options& options = {});

/// Canonical single-annotator M2; sentences without edits get a noop line.
std::string render_m2(std::span<const MultiEditSentence> sentences, int annotator = 0);

// ---------------------------------------------------------------------------
// Native corpus

struct Corpus {
  std::vector<SingleErrorInstance> instances;

  bool operator==(const Corpus&) const = default;
};

/// Parses and validates a corpus document. For every taxonomy in
/// `taxonomies` each instance must carry a gold label that is a leaf (or an
/// accepted alias) or "Other".
Corpus load_corpus(std::string_view document, std::span<const Taxonomy> taxonomies = {});
Corpus load_corpus_file(const std::filesystem::path& path,
                        std::span<const Taxonomy> taxonomies = {});
nlohmann::ordered_json corpus_to_json(const Corpus& corpus);
std::string save_corpus(const Corpus& corpus);

/// Gold-label counts for one taxonomy id, including "Other".
std::map<std::string, std::size_t> label_histogram(const Corpus& corpus,
                                                   std::string_view taxonomy_id);

}  // namespace taxeval
