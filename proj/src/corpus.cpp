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

#include <set>

#include "json_util.hpp"
#include "taxeval/corpus.hpp"
#include "taxeval/error.hpp"

namespace taxeval {

using detail::require;
using detail::require_integer;
using detail::require_string;

namespace {

SingleErrorInstance instance_from_json(const nlohmann::json& j, std::size_t index) {
  const std::string where = "corpus instance #" + std::to_string(index);
  SingleErrorInstance inst;
  inst.id = require_string(j, "id", where);
  inst.source = tokenize(require_string(j, "source", where));
  inst.target = tokenize(require_string(j, "target", where));

  const auto& edit = require(j, "edit", where);
  const long long start = require_integer(edit, "start", where + " edit");
  const long long end = require_integer(edit, "end", where + " edit");
  if (start < 0 || end < start) throw SchemaError(where + ": invalid edit span");
  inst.edit.start = static_cast<std::size_t>(start);
  inst.edit.end = static_cast<std::size_t>(end);
  inst.edit.replacement = tokenize(require_string(edit, "replacement", where + " edit"));
  if (edit.contains("type")) inst.edit.type_hint = require_string(edit, "type", where + " edit");

  const auto& gold = require(j, "gold", where);
  if (!gold.is_object()) throw SchemaError(where + ": \"gold\" must be an object");
  for (const auto& [key, value] : gold.items()) {
    if (!value.is_string()) throw SchemaError(where + ": gold label for " + key + " must be a string");
    inst.gold.emplace(key, value.get<std::string>());
  }
  return inst;
}

void validate_instance(const SingleErrorInstance& inst, std::span<const Taxonomy> taxonomies) {
  const std::string where = "instance " + inst.id;
  Tokens applied;
  try {
    applied = apply_edits(inst.source, std::span(&inst.edit, 1));
  } catch (const EditError& e) {
    throw ValidationError(where + ": " + e.what());
  }
  if (applied != inst.target) {
    throw ValidationError(where + ": applying the edit to the source does not give the target");
  }
  if (extract_edits(inst.source, inst.target).size() != 1) {
    throw ValidationError(where + ": source and target differ by more than one edit");
  }
  for (const auto& t : taxonomies) {
    auto it = inst.gold.find(t.id());
    if (it == inst.gold.end()) {
      throw ValidationError(where + ": no gold label for taxonomy " + t.id());
    }
    if (!t.resolve_label(it->second)) {
      throw ValidationError(where + ": gold label \"" + it->second + "\" is neither a leaf of " +
                            t.id() + " nor \"Other\"");
    }
  }
}

}  // namespace

Corpus load_corpus(std::string_view document, std::span<const Taxonomy> taxonomies) {
  const auto doc = detail::parse_document(document, "corpus");
  Corpus corpus;
  std::set<std::string> ids;
  std::size_t index = 0;
  for (const auto& j : detail::require_array(doc, "instances", "corpus")) {
    auto inst = instance_from_json(j, index++);
    if (!ids.insert(inst.id).second) throw ValidationError("duplicate instance id " + inst.id);
    validate_instance(inst, taxonomies);
    corpus.instances.push_back(std::move(inst));
  }
  return corpus;
}

Corpus load_corpus_file(const std::filesystem::path& path, std::span<const Taxonomy> taxonomies) {
  return load_corpus(detail::read_file(path), taxonomies);
}

nlohmann::ordered_json corpus_to_json(const Corpus& corpus) {
  auto instances = nlohmann::ordered_json::array();
  for (const auto& inst : corpus.instances) {
    nlohmann::ordered_json j;
    j["id"] = inst.id;
    j["source"] = join(inst.source);
    j["target"] = join(inst.target);
    nlohmann::ordered_json edit;
    edit["start"] = inst.edit.start;
    edit["end"] = inst.edit.end;
    edit["replacement"] = join(inst.edit.replacement);
    if (!inst.edit.type_hint.empty()) edit["type"] = inst.edit.type_hint;
    j["edit"] = std::move(edit);
    nlohmann::ordered_json gold = nlohmann::ordered_json::object();
    for (const auto& [k, v] : inst.gold) gold[k] = v;
    j["gold"] = std::move(gold);
    instances.push_back(std::move(j));
  }
  nlohmann::ordered_json doc;
  doc["instances"] = std::move(instances);
  return doc;
}

std::string save_corpus(const Corpus& corpus) { return corpus_to_json(corpus).dump(2) + "\n"; }

std::map<std::string, std::size_t> label_histogram(const Corpus& corpus,
                                                   std::string_view taxonomy_id) {
  std::map<std::string, std::size_t> counts;
  for (const auto& inst : corpus.instances) {
    auto it = inst.gold.find(std::string(taxonomy_id));
    if (it != inst.gold.end()) ++counts[it->second];
  }
  return counts;
}

}  // namespace taxeval
