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

#include "json_util.hpp"
#include "taxeval/error.hpp"
#include "taxeval/report.hpp"

namespace taxeval {

namespace {

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::optional<double> read_optional(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto& v = detail::require(obj, key, where);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw SchemaError(where + ": field \"" + key + "\" must be a number or null");
  return v.get<double>();
}

double read_number(const nlohmann::json& obj, const char* key, const std::string& where) {
  auto v = read_optional(obj, key, where);
  if (!v) throw SchemaError(where + ": field \"" + key + "\" must be a number");
  return *v;
}

}  // namespace

nlohmann::ordered_json config_to_json(const EvalConfig& config) {
  nlohmann::ordered_json j;
  j["tau"] = config.tau;
  j["k"] = config.k;
  j["samples"] = config.samples;
  j["seed"] = config.seed;
  return j;
}

nlohmann::ordered_json scores_to_json(const Scores& s) {
  nlohmann::ordered_json j;
  j["exclusivity"] = optional_number(s.exclusivity);
  j["coverage"] = s.coverage;
  j["balance"] = s.balance;
  j["macro_f1"] = optional_number(s.macro_f1);
  j["micro_f1"] = optional_number(s.micro_f1);
  return j;
}

nlohmann::ordered_json report_to_json(const MetricReport& report, const EvalConfig& config,
                                      const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["taxonomy"] = report.taxonomy_id;
  j["taxonomy_name"] = report.taxonomy_name;
  j["m"] = report.m;
  j["instances"] = report.instances;
  j["config"] = config_to_json(config);
  j["scores"] = scores_to_json(report.scores);
  auto& pc = j["per_class"] = nlohmann::ordered_json::array();
  for (const auto& c : report.per_class) {
    pc.push_back({{"label", c.label},
                  {"precision", c.precision},
                  {"recall", c.recall},
                  {"f1", c.f1},
                  {"support", c.support}});
  }
  j["excluded"] = report.excluded;
  j["manifest"] = manifest.to_json();
  return j;
}

MetricReport report_from_json(const nlohmann::json& doc) {
  const std::string where = "report";
  MetricReport r;
  r.taxonomy_id = detail::require_string(doc, "taxonomy", where);
  r.taxonomy_name = doc.value("taxonomy_name", r.taxonomy_id);
  r.m = static_cast<std::size_t>(doc.value("m", 0));
  r.instances = static_cast<std::size_t>(doc.value("instances", 0));
  r.excluded = static_cast<std::size_t>(detail::require_integer(doc, "excluded", where));
  const auto& s = detail::require(doc, "scores", where);
  r.scores.exclusivity = read_optional(s, "exclusivity", "scores");
  r.scores.coverage = read_number(s, "coverage", "scores");
  r.scores.balance = read_number(s, "balance", "scores");
  r.scores.macro_f1 = read_optional(s, "macro_f1", "scores");
  r.scores.micro_f1 = read_optional(s, "micro_f1", "scores");
  for (const auto& c : detail::require_array(doc, "per_class", where)) {
    r.per_class.push_back({detail::require_string(c, "label", "per_class"), read_number(c, "precision", "per_class"),
                           read_number(c, "recall", "per_class"), read_number(c, "f1", "per_class"),
                           static_cast<std::size_t>(detail::require_integer(c, "support", "per_class"))});
  }
  return r;
}

}  // namespace taxeval
