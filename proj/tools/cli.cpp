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

#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "taxeval/ablation.hpp"
#include "taxeval/corpus.hpp"
#include "taxeval/error.hpp"
#include "taxeval/llm.hpp"
#include "taxeval/metrics.hpp"
#include "taxeval/report.hpp"
#include "taxeval/table.hpp"
#include "taxeval/taxonomy.hpp"

namespace taxeval::cli {

namespace {

namespace fs = std::filesystem;

/// Flag values that parse but make no sense together.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes through a temporary file so a reader never sees half a file.
void write_text(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out.flush()) throw Error("cannot write " + path.string());
  }
  fs::rename(tmp, path);
}

std::string pretty(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

struct ModelFlags {
  std::string backend = "mock";
  std::string endpoint;
  std::string model;
  std::string replay;
  EvalConfig config;
};

void add_model_flags(CLI::App* sub, ModelFlags& f, bool with_backend) {
  if (with_backend) {
    sub->add_option("--backend", f.backend, "Model backend")
        ->check(CLI::IsMember({"mock", "http"}))
        ->capture_default_str();
    sub->add_option("--endpoint", f.endpoint, "Chat-completions URL (http backend)");
    sub->add_option("--model", f.model, "Model name sent to the endpoint");
  }
  sub->add_option("--tau", f.config.tau, "Confidence threshold")->capture_default_str();
  sub->add_option("--top-k", f.config.k, "Labels requested per reply")->capture_default_str();
  sub->add_option("--samples", f.config.samples, "Self-random samples per instance")->capture_default_str();
  sub->add_option("--temperature", f.config.temperature, "Sampling temperature")->capture_default_str();
  sub->add_option("--seed", f.config.seed, "Seed of the mock backend")->capture_default_str();
  sub->add_option("--max-parallel", f.config.max_parallel, "Requests in flight")->capture_default_str();
  sub->add_option("--ambiguity-rate", f.config.backend.ambiguity_rate,
                  "Mock: chance of a second label above tau")
      ->capture_default_str();
  sub->add_option("--malformed-rate", f.config.backend.malformed_rate, "Mock: chance of an unparseable reply")
      ->capture_default_str();
}

EvalConfig resolve_config(const ModelFlags& f) {
  EvalConfig c = f.config;
  if (!f.replay.empty()) {
    c.backend.kind = BackendKind::Replay;
  } else if (f.backend == "http") {
    c.backend.kind = BackendKind::Http;
    c.backend.endpoint = f.endpoint;
    c.backend.model = f.model;
    if (const char* key = std::getenv("TAXEVAL_API_KEY")) c.backend.api_key = key;
  } else {
    c.backend.kind = BackendKind::Mock;
  }
  try {
    c.validate();
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  return c;
}

std::string_view kind_name(BackendKind k) {
  switch (k) {
    case BackendKind::Mock: return "mock";
    case BackendKind::Http: return "http";
    case BackendKind::Replay: return "replay";
  }
  return "?";
}

nlohmann::ordered_json resolved_config(const EvalConfig& c) {
  nlohmann::ordered_json j = config_to_json(c);
  j["temperature"] = c.temperature;
  j["max_parallel"] = c.max_parallel;
  j["max_attempts"] = c.max_attempts;
  auto& b = j["backend"];
  b["kind"] = kind_name(c.backend.kind);
  if (c.backend.kind == BackendKind::Http) {
    b["endpoint"] = c.backend.endpoint;
    b["model"] = c.backend.model;
  }
  if (c.backend.kind == BackendKind::Mock) {
    b["ambiguity_rate"] = c.backend.ambiguity_rate;
    b["malformed_rate"] = c.backend.malformed_rate;
  }
  return j;
}

RunManifest make_manifest(std::string command, const EvalConfig& config) {
  RunManifest m;
  m.command = std::move(command);
  m.config = resolved_config(config);
  m.timestamp = manifest_timestamp();
  m.seed = config.seed;
  return m;
}

std::vector<Taxonomy> load_taxonomies(const std::vector<std::string>& paths) {
  std::map<std::string, Taxonomy> by_id;
  for (const auto& p : paths) {
    Taxonomy t = Taxonomy::load_file(p);
    const auto id = t.id();
    if (!by_id.emplace(id, std::move(t)).second) throw ValidationError("taxonomy " + id + " given twice");
  }
  std::vector<std::string> ids;
  for (const auto& [id, t] : by_id) ids.push_back(id);
  std::vector<Taxonomy> out;
  for (const auto& id : order_taxonomies(ids)) out.push_back(by_id.at(id));
  return out;
}

BackendFactory make_factory(const EvalConfig& config, const std::string& replay_path) {
  std::shared_ptr<const std::vector<RawModelReply>> records;
  if (config.backend.kind == BackendKind::Replay) {
    records = std::make_shared<const std::vector<RawModelReply>>(audit_from_jsonl(read_text(replay_path)));
  }
  return [config, records](const Taxonomy& t) -> std::unique_ptr<Backend> {
    switch (config.backend.kind) {
      case BackendKind::Mock: return std::make_unique<MockBackend>(t, config);
      case BackendKind::Http: return std::make_unique<HttpBackend>(config.backend);
      case BackendKind::Replay: return std::make_unique<ReplayBackend>(*records);
    }
    return nullptr;
  };
}

void warn_failures(std::ostream& err, const PredictionRun& run, int attempts) {
  if (run.parse_failures || run.transport_failures) {
    err << "warning: " << run.taxonomy_id << ": " << run.parse_failures << " unparseable replies, "
        << run.transport_failures << " failed requests\n";
  }
  if (run.excluded) {
    err << "warning: " << run.taxonomy_id << ": " << run.excluded << " instances excluded after " << attempts
        << " attempts\n";
  }
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string corpus;
  std::vector<std::string> taxonomies;
  std::string out;
  ModelFlags model;
};

int evaluate(const std::string& command, const EvaluateArgs& a, std::optional<fs::path>& marker,
             std::ostream& out, std::ostream& err) {
  const EvalConfig config = resolve_config(a.model);
  const fs::path dir(a.out);
  marker = dir / "INCOMPLETE";

  const auto taxonomies = load_taxonomies(a.taxonomies);
  const Corpus corpus = load_corpus_file(a.corpus, taxonomies);
  const auto backends = make_factory(config, a.model.replay);

  RunManifest manifest = make_manifest(command, config);
  manifest.add_input(a.corpus);
  for (const auto& p : a.taxonomies) manifest.add_input(p);
  if (!a.model.replay.empty()) manifest.add_input(a.model.replay);

  ModelRow row;
  std::vector<RawModelReply> audit;
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& t : taxonomies) {
    auto backend = backends(t);
    if (row.model.empty()) row.model = backend->describe();
    const PredictionRun predictions = predict_corpus(corpus, t, config, *backend);
    warn_failures(err, predictions, config.max_attempts);
    const LabeledRun run = make_run(corpus, t, config.tau, config.k, &predictions);
    MetricReport report = evaluate_run(run, t.name(), predictions.excluded);
    files.emplace_back("report_" + t.id() + ".json", pretty(report_to_json(report, config, manifest)));
    audit.insert(audit.end(), predictions.audit.begin(), predictions.audit.end());
    row.reports.push_back(std::move(report));
  }
  const std::string table = render_metric_table({row});

  fs::create_directories(dir);
  for (const auto& [name, text] : files) write_text(dir / name, text);
  if (config.backend.kind != BackendKind::Replay) write_text(dir / "audit.jsonl", audit_to_jsonl(audit));
  write_text(dir / "table.txt", table);
  fs::remove(*marker);
  out << table;
  return kExitOk;
}

struct DecomposeArgs {
  std::string m2;
  std::string out;
  int annotator = 0;
};

int decompose_cmd(const DecomposeArgs& a, std::ostream& out) {
  const auto sentences = parse_m2(read_text(a.m2), M2Options{a.annotator});
  DecomposeStats stats;
  Corpus corpus{decompose_all(sentences, &stats)};
  write_text(a.out, save_corpus(corpus));
  out << "sentences " << stats.sentences << ", noop " << stats.noop_sentences << ", instances " << stats.instances
      << ", rejected edits " << stats.rejected_edits << "\n";
  return kExitOk;
}

struct AgreementArgs {
  std::vector<std::string> annotators;  // a, b, optional c
  std::vector<std::string> taxonomies;
  std::string out;
};

int agreement(const AgreementArgs& a, std::ostream& out) {
  const auto taxonomies = load_taxonomies(a.taxonomies);
  static constexpr std::string_view kNames[] = {"A", "B", "C"};
  std::vector<Corpus> corpora;
  for (const auto& p : a.annotators) corpora.push_back(load_corpus_file(p, taxonomies));

  // Annotations are joined on instance id.
  std::vector<std::map<std::string, const SingleErrorInstance*>> by_id(corpora.size());
  for (std::size_t i = 0; i < corpora.size(); ++i) {
    for (const auto& inst : corpora[i].instances) by_id[i].emplace(inst.id, &inst);
    if (by_id[i].size() != by_id[0].size() ||
        !std::equal(by_id[i].begin(), by_id[i].end(), by_id[0].begin(),
                    [](const auto& x, const auto& y) { return x.first == y.first; })) {
      throw ValidationError("annotator files " + a.annotators[0] + " and " + a.annotators[i] +
                            " do not cover the same instances");
    }
  }

  auto labels = [&](std::size_t annotator, const Taxonomy& t) {
    std::vector<std::string> out_labels;
    for (const auto& [id, inst] : by_id[annotator]) out_labels.push_back(*t.resolve_label(inst->gold.at(t.id())));
    return out_labels;
  };

  std::vector<std::string> ids;
  for (const auto& t : taxonomies) ids.push_back(t.id());
  std::vector<KappaRow> rows;
  nlohmann::ordered_json doc;
  doc["taxonomies"] = ids;
  auto& pairs = doc["pairs"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < corpora.size(); ++i) {
    for (std::size_t j = i + 1; j < corpora.size(); ++j) {
      KappaRow row{std::string(kNames[i]) + " vs " + std::string(kNames[j]), {}};
      nlohmann::ordered_json kappas;
      for (const auto& t : taxonomies) {
        const double k = cohens_kappa(labels(i, t), labels(j, t));
        row.per_taxonomy.push_back(k);
        kappas[t.id()] = k;
      }
      pairs.push_back({{"a", kNames[i]}, {"b", kNames[j]}, {"kappa", kappas}});
      rows.push_back(std::move(row));
    }
  }
  nlohmann::ordered_json avg;
  for (std::size_t c = 0; c < ids.size(); ++c) {
    double s = 0.0;
    for (const auto& r : rows) s += r.per_taxonomy[c];
    avg[ids[c]] = s / static_cast<double>(rows.size());
  }
  doc["average"] = avg;

  const std::string table = render_kappa_table(ids, rows);
  if (!a.out.empty()) write_text(a.out, pretty(doc));
  out << table;
  return kExitOk;
}

struct FuseArgs {
  std::string corpus;
  std::string taxonomy;
  std::string fusion;
  std::string out;
  bool relabel_only = false;
  ModelFlags model;
};

int fuse_cmd(const FuseArgs& a, std::ostream& out, std::ostream& err) {
  const EvalConfig config = resolve_config(a.model);
  const Taxonomy taxonomy = Taxonomy::load_file(a.taxonomy);
  const FusionMap fusion = FusionMap::load_file(a.fusion);
  const Corpus corpus = load_corpus_file(a.corpus, std::span(&taxonomy, 1));

  RunManifest manifest = make_manifest("fuse", config);
  manifest.config["relabel_only"] = a.relabel_only;
  manifest.add_input(a.corpus);
  manifest.add_input(a.taxonomy);
  manifest.add_input(a.fusion);

  const AblationReport report =
      run_ablation(corpus, taxonomy, fusion, config, make_factory(config, a.model.replay), a.relabel_only);
  if (report.before.excluded || report.after.excluded) {
    err << "warning: " << report.before.excluded << " / " << report.after.excluded
        << " instances excluded before / after fusion\n";
  }
  write_text(a.out, pretty(ablation_to_json(report, config, manifest)));
  out << render_ablation_table({report});
  return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evaluate grammatical error taxonomies with language models", "taxeval"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  EvaluateArgs eval_args;
  auto* eval = app.add_subcommand("evaluate", "Score taxonomies on a corpus");
  eval->add_option("--corpus", eval_args.corpus, "Native JSON corpus")->required()->check(CLI::ExistingFile);
  eval->add_option("--taxonomy", eval_args.taxonomies, "Taxonomy JSON (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--out", eval_args.out, "Output directory")->required();
  eval->add_option("--replay", eval_args.model.replay, "Serve replies from an audit log")
      ->check(CLI::ExistingFile);
  add_model_flags(eval, eval_args.model, true);

  EvaluateArgs replay_args;
  auto* replay = app.add_subcommand("replay", "Recompute reports from an audit log");
  replay->add_option("--corpus", replay_args.corpus, "Native JSON corpus")->required()->check(CLI::ExistingFile);
  replay->add_option("--taxonomy", replay_args.taxonomies, "Taxonomy JSON (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  replay->add_option("--out", replay_args.out, "Output directory")->required();
  replay->add_option("--replay", replay_args.model.replay, "Audit log (JSON lines)")
      ->required()
      ->check(CLI::ExistingFile);
  add_model_flags(replay, replay_args.model, false);

  DecomposeArgs dec_args;
  auto* dec = app.add_subcommand("decompose", "Split M2 sentences into single-error instances");
  dec->add_option("--m2", dec_args.m2, "M2 input")->required()->check(CLI::ExistingFile);
  dec->add_option("--out", dec_args.out, "Corpus JSON output")->required();
  dec->add_option("--annotator", dec_args.annotator, "Annotator id to read")->capture_default_str();

  AgreementArgs agr_args;
  std::string agr_a, agr_b, agr_c;
  auto* agr = app.add_subcommand("agreement", "Pairwise Cohen's kappa between annotators");
  agr->add_option("--a", agr_a, "Corpus labelled by annotator A")->required()->check(CLI::ExistingFile);
  agr->add_option("--b", agr_b, "Corpus labelled by annotator B")->required()->check(CLI::ExistingFile);
  agr->add_option("--c", agr_c, "Corpus labelled by annotator C")->check(CLI::ExistingFile);
  agr->add_option("--taxonomy", agr_args.taxonomies, "Taxonomy JSON (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  agr->add_option("--out", agr_args.out, "Kappa JSON output");

  FuseArgs fuse_args;
  auto* fz = app.add_subcommand("fuse", "Compare a taxonomy with its fused variant");
  fz->add_option("--corpus", fuse_args.corpus, "Native JSON corpus")->required()->check(CLI::ExistingFile);
  fz->add_option("--taxonomy", fuse_args.taxonomy, "Taxonomy JSON")->required()->check(CLI::ExistingFile);
  fz->add_option("--fusion", fuse_args.fusion, "Fusion map JSON")->required()->check(CLI::ExistingFile);
  fz->add_option("--out", fuse_args.out, "Ablation report output")->required();
  fz->add_flag("--relabel-only", fuse_args.relabel_only, "Relabel gold only, no predictions");
  add_model_flags(fz, fuse_args.model, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  std::optional<fs::path> marker;
  try {
    if (*eval) return evaluate("evaluate", eval_args, marker, out, err);
    if (*replay) return evaluate("replay", replay_args, marker, out, err);
    if (*dec) return decompose_cmd(dec_args, out);
    if (*agr) {
      agr_args.annotators = {agr_a, agr_b};
      if (!agr_c.empty()) agr_args.annotators.push_back(agr_c);
      return agreement(agr_args, out);
    }
    if (*fz) return fuse_cmd(fuse_args, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    if (marker) {
      try {
        write_text(*marker, std::string("run failed: ") + e.what() + "\n");
      } catch (const std::exception&) {
      }
    }
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace taxeval::cli
