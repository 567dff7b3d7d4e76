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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "taxeval/llm.hpp"
#include "taxeval/metrics.hpp"

namespace taxeval {

std::string_view tool_version();

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string file_sha256(const std::filesystem::path& path);

/// ISO-8601 UTC. Honours SOURCE_DATE_EPOCH so reruns can be byte-identical.
std::string manifest_timestamp();

struct InputDigest {
  std::string path;
  std::string sha256;
};

/// Provenance embedded in every report.
struct RunManifest {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<InputDigest> inputs;
  std::string version{tool_version()};
  std::string timestamp;
  std::uint64_t seed = 0;

  void add_input(const std::filesystem::path& path);
  nlohmann::ordered_json to_json() const;
};

nlohmann::ordered_json config_to_json(const EvalConfig& config);
nlohmann::ordered_json scores_to_json(const Scores& scores);

/// Report document for one taxonomy. Prediction-side scores of gold-only
/// runs are null.
nlohmann::ordered_json report_to_json(const MetricReport& report, const EvalConfig& config,
                                      const RunManifest& manifest);

/// Parses the metric part of a report document (taxonomy, scores, per-class
/// table, excluded count). The manifest is ignored.
MetricReport report_from_json(const nlohmann::json& doc);

}  // namespace taxeval
