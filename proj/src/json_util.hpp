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

// Schema-checking accessors shared by the JSON readers.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "taxeval/error.hpp"

namespace taxeval::detail {

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key,
                                     const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(where + ": missing field \"" + key + "\"");
  return *it;
}

inline std::string require_string(const nlohmann::json& obj, const char* key,
                                  const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_string()) throw SchemaError(where + ": field \"" + key + "\" must be a string");
  return v.get<std::string>();
}

inline const nlohmann::json& require_array(const nlohmann::json& obj, const char* key,
                                           const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_array()) throw SchemaError(where + ": field \"" + key + "\" must be an array");
  return v;
}

inline long long require_integer(const nlohmann::json& obj, const char* key,
                                 const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_number_integer()) {
    throw SchemaError(where + ": field \"" + key + "\" must be an integer");
  }
  return v.get<long long>();
}

inline nlohmann::json parse_document(std::string_view text, const std::string& what) {
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(what + ": invalid JSON: " + e.what());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace taxeval::detail
