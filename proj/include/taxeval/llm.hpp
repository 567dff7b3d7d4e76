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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "taxeval/corpus.hpp"
#include "taxeval/taxonomy.hpp"

namespace taxeval {

struct Prediction {
  std::string label;  // leaf code or "Other"
  double confidence = 0.0;

  bool operator==(const Prediction&) const = default;
};

/// Up to k distinct labels with verbalised confidences, ordered by descending
/// confidence (ties by label).
struct PredictionSet {
  std::string instance_id;
  std::vector<Prediction> entries;

  /// Sorts into the canonical order.
  void normalize();
  const Prediction* top() const { return entries.empty() ? nullptr : &entries.front(); }
  bool operator==(const PredictionSet&) const = default;
};

enum class BackendKind { Mock, Http, Replay };

struct BackendConfig {
  BackendKind kind = BackendKind::Mock;
  std::string endpoint;  // http: chat-completions URL
  std::string model;     // http: model name
  std::string api_key;   // http: from TAXEVAL_API_KEY
  double ambiguity_rate = 0.0;      // mock: chance of a second label above tau
  double malformed_rate = 0.0;      // mock: chance of an unparseable reply
  int request_timeout_seconds = 60;
  int retry_backoff_ms = 250;       // base delay between transport retries
};

struct EvalConfig {
  double tau = 0.7;
  int k = 3;
  int samples = 5;
  double temperature = 0.7;
  std::uint64_t seed = 0;
  int max_parallel = 4;
  int max_attempts = 3;  // per (instance, sample), transport or parse failures
  BackendConfig backend;

  /// Throws ValidationError on out-of-range fields.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Prompting and parsing

std::string build_prompt(const SingleErrorInstance& instance, const Taxonomy& taxonomy, int k);

/// Extracts (label, confidence) pairs from free-form model output. Labels are
/// matched against the taxonomy (codes, aliases, names, case-insensitive);
/// percentages are divided by 100; repeated labels keep their highest
/// confidence; at most k entries survive. nullopt when nothing parses.
std::optional<PredictionSet> parse_reply(std::string_view text, const Taxonomy& taxonomy, int k);

/// Avg-Conf: per-label mean over all sets, an absent label counting as 0,
/// truncated to the k best. Throws ValidationError on an empty list.
PredictionSet aggregate_avg_conf(std::span<const PredictionSet> sets, int k);

// ---------------------------------------------------------------------------
// Backends

struct GenerationRequest {
  std::string taxonomy_id;
  std::string instance_id;
  int sample_index = 0;
  int attempt = 0;
  std::string prompt;
  double temperature = 0.0;
  /// Gold label for this taxonomy. Only the mock backend reads it.
  std::string gold_label;
};

/// A text-generation endpoint. Implementations must be safe to call from
/// several threads at once.
class Backend {
 public:
  virtual ~Backend() = default;
  /// Returns the raw reply text. Throws TransportError on failure.
  virtual std::string generate(const GenerationRequest& request) = 0;
  virtual std::string describe() const = 0;
};

/// Deterministic offline backend: the reply is a pure function of
/// (seed, instance id, sample index, attempt).
class MockBackend final : public Backend {
 public:
  MockBackend(const Taxonomy& taxonomy, const EvalConfig& config);
  std::string generate(const GenerationRequest& request) override;
  std::string describe() const override { return "mock"; }

 private:
  std::vector<std::string> labels_;  // leaf codes plus "Other"
  std::uint64_t seed_;
  int k_;
  double ambiguity_rate_;
  double malformed_rate_;
};

/// Chat-completion style JSON endpoint:
/// POST {model, messages, temperature} -> choices[0].message.content.
class HttpBackend final : public Backend {
 public:
  explicit HttpBackend(BackendConfig config);
  std::string generate(const GenerationRequest& request) override;
  std::string describe() const override { return config_.model.empty() ? "http" : config_.model; }

 private:
  BackendConfig config_;
  std::string scheme_host_port_;
  std::string path_;
};

struct RawModelReply {
  std::string taxonomy_id;
  std::string instance_id;
  int sample_index = 0;
  int attempt = 0;
  std::optional<std::string> text;  // absent when the request failed
  std::string error;                // transport error message, if any
  bool parsed = false;

  bool operator==(const RawModelReply&) const = default;
};

/// Serves replies recorded in an audit log, reproducing the live run's
/// retries exactly. A missing or failed record raises TransportError.
class ReplayBackend final : public Backend {
 public:
  explicit ReplayBackend(std::vector<RawModelReply> records);
  std::string generate(const GenerationRequest& request) override;
  std::string describe() const override { return "replay"; }

 private:
  std::map<std::tuple<std::string, std::string, int, int>, RawModelReply> records_;
};

// ---------------------------------------------------------------------------
// Sampling

struct InstancePrediction {
  std::string instance_id;
  std::optional<PredictionSet> aggregated;  // nullopt when excluded
  std::vector<PredictionSet> samples;
};

struct PredictionRun {
  std::string taxonomy_id;
  std::vector<InstancePrediction> instances;  // sorted by instance id
  std::vector<RawModelReply> audit;            // sorted by (instance, sample, attempt)
  std::size_t excluded = 0;
  std::size_t parse_failures = 0;
  std::size_t transport_failures = 0;
};

/// Result of `samples` generations for one instance. Each sample is retried
/// up to max_attempts times; `complete` is false when one ran out of attempts.
struct SampleOutcome {
  std::vector<PredictionSet> sets;
  std::vector<RawModelReply> replies;
  bool complete = true;
};

SampleOutcome sample_predictions(const SingleErrorInstance& instance, const Taxonomy& taxonomy,
                                 const EvalConfig& config, Backend& backend);

/// Runs every instance (up to max_parallel requests in flight) and
/// aggregates with Avg-Conf. Instances with an exhausted sample are excluded.
PredictionRun predict_corpus(const Corpus& corpus, const Taxonomy& taxonomy,
                             const EvalConfig& config, Backend& backend);

// ---------------------------------------------------------------------------
// Audit log (JSON lines)

std::string audit_to_jsonl(std::span<const RawModelReply> replies);
std::vector<RawModelReply> audit_from_jsonl(std::string_view text);

}  // namespace taxeval
