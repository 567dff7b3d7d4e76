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
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace taxeval {

/// Corpus-level sentinel for errors that no error type of a taxonomy covers.
/// Never a node of a taxonomy.
inline constexpr std::string_view kOtherLabel = "Other";

/// Edit-operation tags carried by operation-aware taxonomies such as BRY17.
enum class EditOp { Missing, Replacement, Unnecessary };

char edit_op_tag(EditOp op);
std::optional<EditOp> edit_op_from_tag(std::string_view tag);

struct Example {
  std::string source;
  std::string target;

  bool operator==(const Example&) const = default;
};

struct ErrorType {
  std::string code;
  std::string name;
  std::string definition;
  std::vector<EditOp> edit_ops;
  std::vector<Example> examples;
  std::vector<ErrorType> children;

  bool is_leaf() const { return children.empty(); }
  bool operator==(const ErrorType&) const = default;
};

/// A rooted tree of error types. Leaves are the assignable labels; internal
/// nodes only organise them. Immutable once constructed.
class Taxonomy {
 public:
  /// Validates and indexes. Throws SchemaError / ValidationError.
  Taxonomy(std::string id, std::string name, std::vector<ErrorType> roots);

  static Taxonomy from_json(const nlohmann::json& doc);
  /// Parses a taxonomy document (UTF-8 JSON text).
  static Taxonomy load(std::string_view document);
  static Taxonomy load_file(const std::filesystem::path& path);

  nlohmann::ordered_json to_json() const;
  /// Canonical text form: two-space indented JSON plus a trailing newline.
  std::string serialize() const;

  const std::string& id() const { return id_; }
  const std::string& name() const { return name_; }
  const std::vector<ErrorType>& roots() const { return roots_; }

  /// Depth-first, file-order list of nodes without children.
  std::vector<const ErrorType*> leaf_types() const;
  const std::vector<std::string>& leaf_labels() const { return leaf_codes_; }
  std::size_t m() const { return leaf_codes_.size(); }

  const ErrorType* find(std::string_view code) const;
  bool is_leaf(std::string_view code) const;
  std::optional<std::size_t> leaf_index(std::string_view code) const;
  bool declares_edit_ops() const { return declares_edit_ops_; }

  /// Maps an annotation label onto a leaf code or "Other". Accepts the exact
  /// leaf code, the sentinel, and (for operation-aware taxonomies) an
  /// operation-prefixed alias such as "R:NOUN:NUM" when the leaf declares
  /// that operation. Returns nullopt for anything else.
  std::optional<std::string> resolve_label(std::string_view label) const;

  /// Lenient matching for free-form model output: everything resolve_label
  /// accepts, plus case-insensitive codes, leaf names and "Name (CODE)".
  std::optional<std::string> match_label(std::string_view text) const;

  bool operator==(const Taxonomy& other) const {
    return id_ == other.id_ && name_ == other.name_ && roots_ == other.roots_;
  }

 private:
  void index();

  std::string id_;
  std::string name_;
  std::vector<ErrorType> roots_;
  std::vector<std::string> leaf_codes_;
  std::unordered_map<std::string, std::vector<std::size_t>> path_by_code_;
  std::unordered_map<std::string, std::size_t> leaf_index_;
  bool declares_edit_ops_ = false;
};

/// One merge of a fusion: `absorbed` leaves are replaced by `replacement`.
struct Merge {
  ErrorType replacement;
  std::vector<std::string> absorbed;
};

struct FusionMap {
  std::string taxonomy_id;
  std::vector<Merge> merges;

  static FusionMap from_json(const nlohmann::json& doc);
  static FusionMap load(std::string_view document);
  static FusionMap load_file(const std::filesystem::path& path);
  nlohmann::ordered_json to_json() const;
};

/// Total map from the leaf codes of a source taxonomy to the leaf codes of
/// its fused counterpart.
class LabelRewrite {
 public:
  LabelRewrite() = default;
  explicit LabelRewrite(std::map<std::string, std::string> mapping)
      : mapping_(std::move(mapping)) {}

  /// Throws ValidationError when `leaf` is outside the domain.
  const std::string& operator()(std::string_view leaf) const;
  bool contains(std::string_view leaf) const;
  bool absorbs(std::string_view leaf) const;
  const std::map<std::string, std::string>& mapping() const { return mapping_; }

 private:
  std::map<std::string, std::string> mapping_;
};

struct FusionResult {
  Taxonomy taxonomy;
  LabelRewrite rewrite;
};

/// Replaces each absorbed group by its new leaf. A replacement whose code
/// equals an internal node emptied by the merge takes that node's place;
/// other internal nodes left without children are pruned.
FusionResult fuse(const Taxonomy& taxonomy, const FusionMap& fusion);

}  // namespace taxeval
