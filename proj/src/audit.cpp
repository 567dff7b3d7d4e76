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

#include "json.hpp"
#include "taxeval/error.hpp"
#include "taxeval/llm.hpp"
#include "text_util.hpp"

namespace taxeval {

std::string audit_to_jsonl(std::span<const RawModelReply> replies) {
  std::string out;
  for (const auto& r : replies) {
    nlohmann::ordered_json line;
    line["taxonomy"] = r.taxonomy_id;
    line["instance_id"] = r.instance_id;
    line["sample_index"] = r.sample_index;
    line["attempt"] = r.attempt;
    line["text"] = r.text ? nlohmann::ordered_json(*r.text) : nlohmann::ordered_json(nullptr);
    line["parsed"] = r.parsed;
    if (!r.error.empty()) line["error"] = r.error;
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::vector<RawModelReply> audit_from_jsonl(std::string_view text) {
  std::vector<RawModelReply> out;
  std::size_t lineno = 0;
  for (auto line : text::split_lines(text)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      const auto doc = nlohmann::json::parse(line);
      if (!doc.is_object()) throw ParseError(lineno, "audit record must be an object");
      RawModelReply r;
      r.taxonomy_id = doc.value("taxonomy", "");
      r.instance_id = doc.at("instance_id").get<std::string>();
      r.sample_index = doc.at("sample_index").get<int>();
      r.attempt = doc.value("attempt", 0);
      const auto& t = doc.at("text");
      if (!t.is_null()) r.text = t.get<std::string>();
      r.parsed = doc.value("parsed", false);
      r.error = doc.value("error", "");
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(lineno, std::string("bad audit record: ") + e.what());
    }
  }
  return out;
}

}  // namespace taxeval
