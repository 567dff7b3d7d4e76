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

#include "taxeval/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

#include "json_util.hpp"
#include "taxeval/error.hpp"
#include "text_util.hpp"

namespace taxeval {

using detail::require_array;
using detail::require_string;

char edit_op_tag(EditOp op) {
  switch (op) {
    case EditOp::Missing: return 'M';
    case EditOp::Replacement: return 'R';
    case EditOp::Unnecessary: return 'U';
  }
  return '?';
}

std::optional<EditOp> edit_op_from_tag(std::string_view tag) {
  if (tag == "M") return EditOp::Missing;
  if (tag == "R") return EditOp::Replacement;
  if (tag == "U") return EditOp::Unnecessary;
  return std::nullopt;
}

namespace {

ErrorType node_from_json(const nlohmann::json& j, const std::string& where) {
  ErrorType node;
  node.code = require_string(j, "code", where);
  const std::string here = where + " node \"" + node.code + "\"";
  node.name = require_string(j, "name", here);
  node.definition = require_string(j, "definition", here);
  if (auto it = j.find("edit_ops"); it != j.end()) {
    if (!it->is_array()) throw SchemaError(here + ": \"edit_ops\" must be an array");
    for (const auto& tag : *it) {
      if (!tag.is_string()) throw SchemaError(here + ": edit_ops entries must be strings");
      auto op = edit_op_from_tag(tag.get<std::string>());
      if (!op) throw SchemaError(here + ": unknown edit op \"" + tag.get<std::string>() + "\"");
      node.edit_ops.push_back(*op);
    }
  }
  if (j.contains("examples")) {
    for (const auto& ex : require_array(j, "examples", here)) {
      node.examples.push_back(
          {require_string(ex, "source", here + " example"), require_string(ex, "target", here + " example")});
    }
  }
  if (j.contains("children")) {
    for (const auto& child : require_array(j, "children", here)) {
      node.children.push_back(node_from_json(child, where));
    }
  }
  return node;
}

nlohmann::ordered_json node_to_json(const ErrorType& node) {
  nlohmann::ordered_json j;
  j["code"] = node.code;
  j["name"] = node.name;
  j["definition"] = node.definition;
  if (!node.edit_ops.empty()) {
    auto ops = nlohmann::ordered_json::array();
    for (EditOp op : node.edit_ops) ops.push_back(std::string(1, edit_op_tag(op)));
    j["edit_ops"] = std::move(ops);
  }
  auto examples = nlohmann::ordered_json::array();
  for (const auto& ex : node.examples) {
    nlohmann::ordered_json e;
    e["source"] = ex.source;
    e["target"] = ex.target;
    examples.push_back(std::move(e));
  }
  j["examples"] = std::move(examples);
  auto children = nlohmann::ordered_json::array();
  for (const auto& c : node.children) children.push_back(node_to_json(c));
  j["children"] = std::move(children);
  return j;
}

void validate_node(const ErrorType& node, const std::string& tax_id) {
  const std::string where = tax_id + " node \"" + node.code + "\"";
  if (node.code.empty()) throw ValidationError(tax_id + ": empty error-type code");
  if (node.code == kOtherLabel) {
    throw ValidationError(tax_id + ": \"Other\" is reserved and cannot be a node code");
  }
  if (node.name.empty()) throw ValidationError(where + ": empty name");
  if (!node.edit_ops.empty()) {
    if (!node.is_leaf()) throw ValidationError(where + ": edit_ops only apply to leaf types");
    std::set<EditOp> seen(node.edit_ops.begin(), node.edit_ops.end());
    if (seen.size() != node.edit_ops.size()) throw ValidationError(where + ": repeated edit op");
  }
  for (const auto& ex : node.examples) {
    if (ex.source == ex.target) {
      throw ValidationError(where + ": example source equals its target");
    }
  }
}

}  // namespace

Taxonomy::Taxonomy(std::string id, std::string name, std::vector<ErrorType> roots)
    : id_(std::move(id)), name_(std::move(name)), roots_(std::move(roots)) {
  if (id_.empty()) throw ValidationError("taxonomy id must not be empty");
  index();
}

void Taxonomy::index() {
  path_by_code_.clear();
  leaf_codes_.clear();
  leaf_index_.clear();
  declares_edit_ops_ = false;

  std::vector<std::size_t> path;
  auto walk = [&](auto&& self, const std::vector<ErrorType>& nodes) -> void {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const ErrorType& node = nodes[i];
      validate_node(node, id_);
      path.push_back(i);
      if (!path_by_code_.emplace(node.code, path).second) {
        throw ValidationError(id_ + ": duplicate error-type code \"" + node.code + "\"");
      }
      if (node.is_leaf()) {
        leaf_index_.emplace(node.code, leaf_codes_.size());
        leaf_codes_.push_back(node.code);
        declares_edit_ops_ = declares_edit_ops_ || !node.edit_ops.empty();
      } else {
        self(self, node.children);
      }
      path.pop_back();
    }
  };
  walk(walk, roots_);

  if (leaf_codes_.size() < 2) {
    throw ValidationError(id_ + ": a taxonomy needs at least 2 leaf error types, found " +
                          std::to_string(leaf_codes_.size()));
  }
}

Taxonomy Taxonomy::from_json(const nlohmann::json& doc) {
  const std::string where = "taxonomy";
  std::string id = require_string(doc, "id", where);
  std::string name = require_string(doc, "name", where);
  std::vector<ErrorType> roots;
  for (const auto& n : require_array(doc, "nodes", where)) {
    roots.push_back(node_from_json(n, "taxonomy " + id));
  }
  return Taxonomy(std::move(id), std::move(name), std::move(roots));
}

Taxonomy Taxonomy::load(std::string_view document) {
  return from_json(detail::parse_document(document, "taxonomy"));
}

Taxonomy Taxonomy::load_file(const std::filesystem::path& path) {
  return load(detail::read_file(path));
}

nlohmann::ordered_json Taxonomy::to_json() const {
  nlohmann::ordered_json j;
  j["id"] = id_;
  j["name"] = name_;
  auto nodes = nlohmann::ordered_json::array();
  for (const auto& r : roots_) nodes.push_back(node_to_json(r));
  j["nodes"] = std::move(nodes);
  return j;
}

std::string Taxonomy::serialize() const { return to_json().dump(2) + "\n"; }

std::vector<const ErrorType*> Taxonomy::leaf_types() const {
  std::vector<const ErrorType*> out;
  out.reserve(leaf_codes_.size());
  for (const auto& code : leaf_codes_) out.push_back(find(code));
  return out;
}

const ErrorType* Taxonomy::find(std::string_view code) const {
  auto it = path_by_code_.find(std::string(code));
  if (it == path_by_code_.end()) return nullptr;
  const std::vector<ErrorType>* level = &roots_;
  const ErrorType* node = nullptr;
  for (std::size_t i : it->second) {
    node = &(*level)[i];
    level = &node->children;
  }
  return node;
}

bool Taxonomy::is_leaf(std::string_view code) const {
  return leaf_index_.count(std::string(code)) != 0;
}

std::optional<std::size_t> Taxonomy::leaf_index(std::string_view code) const {
  auto it = leaf_index_.find(std::string(code));
  if (it == leaf_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> Taxonomy::resolve_label(std::string_view label) const {
  if (label == kOtherLabel) return std::string(kOtherLabel);
  if (is_leaf(label)) return std::string(label);
  if (declares_edit_ops_ && label.size() > 2 && label[1] == ':') {
    auto op = edit_op_from_tag(label.substr(0, 1));
    std::string_view base = label.substr(2);
    if (op && is_leaf(base)) {
      const ErrorType* leaf = find(base);
      if (std::find(leaf->edit_ops.begin(), leaf->edit_ops.end(), *op) != leaf->edit_ops.end()) {
        return std::string(base);
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> Taxonomy::match_label(std::string_view raw) const {
  std::string text = text::trim_chars(raw, " \t\"'`*_");
  if (text.empty()) return std::nullopt;
  if (auto r = resolve_label(text)) return r;

  const std::string upper = text::to_upper(text);
  if (upper == text::to_upper(kOtherLabel)) return std::string(kOtherLabel);
  for (const auto& code : leaf_codes_) {
    if (text::to_upper(code) == upper) return code;
  }
  if (declares_edit_ops_ && upper.size() > 2 && upper[1] == ':') {
    const std::string base = upper.substr(2);
    for (const auto& code : leaf_codes_) {
      if (text::to_upper(code) == base) return resolve_label(upper.substr(0, 2) + code);
    }
  }
  for (const auto& code : leaf_codes_) {
    if (text::to_upper(find(code)->name) == upper) return code;
  }

  // "Noun Number (NOUN:NUM)" and similar.
  auto open = text.rfind('(');
  auto close = text.rfind(')');
  if (open != std::string::npos && close != std::string::npos && close > open) {
    if (auto r = match_label(text.substr(open + 1, close - open - 1))) return r;
    if (auto r = match_label(text.substr(0, open))) return r;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Fusion

FusionMap FusionMap::from_json(const nlohmann::json& doc) {
  const std::string where = "fusion map";
  FusionMap f;
  f.taxonomy_id = require_string(doc, "taxonomy_id", where);
  for (const auto& m : require_array(doc, "merges", where)) {
    Merge merge;
    merge.replacement = node_from_json(detail::require(m, "new", where), where);
    for (const auto& code : require_array(m, "absorb", where)) {
      if (!code.is_string()) throw SchemaError(where + ": absorbed codes must be strings");
      merge.absorbed.push_back(code.get<std::string>());
    }
    f.merges.push_back(std::move(merge));
  }
  return f;
}

FusionMap FusionMap::load(std::string_view document) {
  return from_json(detail::parse_document(document, "fusion map"));
}

FusionMap FusionMap::load_file(const std::filesystem::path& path) {
  return load(detail::read_file(path));
}

nlohmann::ordered_json FusionMap::to_json() const {
  nlohmann::ordered_json j;
  j["taxonomy_id"] = taxonomy_id;
  auto merges_json = nlohmann::ordered_json::array();
  for (const auto& m : merges) {
    nlohmann::ordered_json mj;
    mj["new"] = node_to_json(m.replacement);
    mj["absorb"] = m.absorbed;
    merges_json.push_back(std::move(mj));
  }
  j["merges"] = std::move(merges_json);
  return j;
}

const std::string& LabelRewrite::operator()(std::string_view leaf) const {
  auto it = mapping_.find(std::string(leaf));
  if (it == mapping_.end()) {
    throw ValidationError("label \"" + std::string(leaf) + "\" is outside the rewrite domain");
  }
  return it->second;
}

bool LabelRewrite::contains(std::string_view leaf) const {
  return mapping_.count(std::string(leaf)) != 0;
}

bool LabelRewrite::absorbs(std::string_view leaf) const {
  auto it = mapping_.find(std::string(leaf));
  return it != mapping_.end() && it->second != it->first;
}

namespace {

void collect_leaves(const ErrorType& node, std::vector<std::string>& out) {
  if (node.is_leaf()) {
    out.push_back(node.code);
    return;
  }
  for (const auto& c : node.children) collect_leaves(c, out);
}

}  // namespace

FusionResult fuse(const Taxonomy& taxonomy, const FusionMap& fusion) {
  if (fusion.taxonomy_id != taxonomy.id()) {
    throw ValidationError("fusion map targets \"" + fusion.taxonomy_id + "\" but taxonomy is \"" +
                          taxonomy.id() + "\"");
  }

  std::map<std::string, std::size_t> owner;  // absorbed leaf -> merge index
  for (std::size_t g = 0; g < fusion.merges.size(); ++g) {
    const Merge& merge = fusion.merges[g];
    if (merge.absorbed.empty()) throw ValidationError("fusion merge absorbs no codes");
    if (!merge.replacement.is_leaf()) {
      throw ValidationError("fusion replacement \"" + merge.replacement.code + "\" must be a leaf");
    }
    for (const auto& code : merge.absorbed) {
      const ErrorType* node = taxonomy.find(code);
      if (!node) throw ValidationError("absorbed code \"" + code + "\" not found in " + taxonomy.id());
      if (!node->is_leaf()) throw ValidationError("absorbed code \"" + code + "\" is not a leaf");
      if (!owner.emplace(code, g).second) {
        throw ValidationError("absorbed code \"" + code + "\" appears in more than one merge");
      }
    }
  }

  // A merge takes the place of an internal node with its own code when every
  // leaf under that node is absorbed by it; otherwise it sits where its first
  // absorbed leaf was.
  std::vector<bool> replaces_internal(fusion.merges.size(), false);
  for (std::size_t g = 0; g < fusion.merges.size(); ++g) {
    const ErrorType* node = taxonomy.find(fusion.merges[g].replacement.code);
    if (!node || node->is_leaf()) continue;
    std::vector<std::string> leaves;
    collect_leaves(*node, leaves);
    replaces_internal[g] = std::all_of(leaves.begin(), leaves.end(), [&](const std::string& c) {
      auto it = owner.find(c);
      return it != owner.end() && it->second == g;
    });
  }

  std::vector<bool> placed(fusion.merges.size(), false);
  auto transform = [&](auto&& self, const std::vector<ErrorType>& nodes) -> std::vector<ErrorType> {
    std::vector<ErrorType> out;
    for (const auto& node : nodes) {
      if (node.is_leaf()) {
        auto it = owner.find(node.code);
        if (it == owner.end()) {
          out.push_back(node);
        } else if (!replaces_internal[it->second] && !placed[it->second]) {
          out.push_back(fusion.merges[it->second].replacement);
          placed[it->second] = true;
        }
        continue;
      }
      ErrorType copy = node;
      copy.children = self(self, node.children);
      if (!copy.children.empty()) {
        out.push_back(std::move(copy));
        continue;
      }
      for (std::size_t g = 0; g < fusion.merges.size(); ++g) {
        if (replaces_internal[g] && !placed[g] && fusion.merges[g].replacement.code == node.code) {
          out.push_back(fusion.merges[g].replacement);
          placed[g] = true;
          break;
        }
      }
    }
    return out;
  };
  std::vector<ErrorType> roots = transform(transform, taxonomy.roots());

  Taxonomy fused(taxonomy.id(), taxonomy.name(), std::move(roots));

  std::map<std::string, std::string> mapping;
  for (const auto& code : taxonomy.leaf_labels()) {
    auto it = owner.find(code);
    mapping.emplace(code, it == owner.end() ? code : fusion.merges[it->second].replacement.code);
  }
  return {std::move(fused), LabelRewrite(std::move(mapping))};
}

}  // namespace taxeval
