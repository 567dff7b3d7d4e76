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

// Paths and synthetic-data generators shared by the test binaries.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle/oracle.hpp"
#include "taxeval/corpus.hpp"
#include "taxeval/llm.hpp"
#include "taxeval/metrics.hpp"
#include "taxeval/taxonomy.hpp"

namespace taxeval::testing {

inline std::filesystem::path source_dir() { return TAXEVAL_SOURCE_DIR; }

inline std::filesystem::path taxonomy_path(const std::string& file) {
  return source_dir() / "data" / "taxonomies" / (file + ".json");
}

inline std::filesystem::path fusion_path(const std::string& file) {
  return source_dir() / "data" / "taxonomies" / "fusion" / (file + ".json");
}

inline std::vector<Taxonomy> shipped_taxonomies() {
  std::vector<Taxonomy> out;
  for (const char* f : {"pol73", "tuc74", "bry17", "fei23"}) out.push_back(Taxonomy::load_file(taxonomy_path(f)));
  return out;
}

/// Fresh, empty scratch directory.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("taxeval-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline Taxonomy flat_taxonomy(const std::string& id, std::size_t m) {
  std::vector<ErrorType> leaves;
  for (std::size_t i = 0; i < m; ++i) {
    leaves.push_back({"C" + std::to_string(i), "Class " + std::to_string(i), "", {}, {}, {}});
  }
  return Taxonomy(id, id, {ErrorType{"1", "Root", "", {}, {}, std::move(leaves)}});
}

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double unit(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

struct SyntheticRun {
  LabeledRun run;
  std::vector<oracle::Item> items;
  std::vector<std::string> leaves;
};

/// Random gold labels (about 10% "Other") and prediction sets of 1..k
/// distinct labels. Confidences are biased towards tau itself so the strict
/// threshold is exercised.
inline SyntheticRun random_run(std::mt19937_64& rng, std::size_t m, std::size_t n, int k, double tau) {
  SyntheticRun s;
  for (std::size_t i = 0; i < m; ++i) s.leaves.push_back("C" + std::to_string(i));
  std::vector<std::string> menu = s.leaves;
  menu.emplace_back(kOtherLabel);

  s.run.taxonomy_id = "SYN";
  s.run.leaf_labels = s.leaves;
  s.run.tau = tau;
  s.run.k = k;
  for (std::size_t i = 0; i < n; ++i) {
    std::string gold = (i > 0 && unit(rng) < 0.1) ? std::string(kOtherLabel) : s.leaves[pick(rng, m)];
    PredictionSet set;
    char id[32];
    std::snprintf(id, sizeof id, "x%05zu", i);
    set.instance_id = id;
    std::vector<std::string> labels = menu;
    std::shuffle(labels.begin(), labels.end(), rng);
    const std::size_t size = 1 + pick(rng, std::min<std::size_t>(static_cast<std::size_t>(k), labels.size()));
    oracle::Item item{gold, {}};
    for (std::size_t j = 0; j < size; ++j) {
      double c = 0.0;
      switch (pick(rng, 4)) {
        case 0: c = tau; break;
        case 1: c = std::nextafter(tau, 1.0); break;
        case 2: c = std::round(unit(rng) * 100.0) / 100.0; break;
        default: c = unit(rng); break;
      }
      set.entries.push_back({labels[j], c});
      item.prediction.emplace_back(labels[j], c);
    }
    set.normalize();
    s.run.items.push_back({id, gold, set});
    s.items.push_back(std::move(item));
  }
  return s;
}

/// M2 text of `sentences` sentences, each with min..max edits over unique
/// tokens, edits at least one token apart. Adds the edit count to `*edits`.
inline std::string synthetic_m2(std::mt19937_64& rng, std::size_t sentences, std::size_t min_edits,
                                std::size_t max_edits, std::size_t* edits = nullptr) {
  std::ostringstream out;
  for (std::size_t s = 0; s < sentences; ++s) {
    const std::size_t n_edits = min_edits + pick(rng, max_edits - min_edits + 1);
    const std::size_t len = 3 * n_edits + 2 + pick(rng, 4);
    out << "S";
    for (std::size_t i = 0; i < len; ++i) out << " w" << s << "_" << i;
    out << "\n";
    // One slot of three tokens per edit keeps edits apart.
    std::vector<std::size_t> slots(len / 3);
    std::iota(slots.begin(), slots.end(), 0);
    std::shuffle(slots.begin(), slots.end(), rng);
    slots.resize(n_edits);
    std::sort(slots.begin(), slots.end());
    std::size_t fresh = 0;
    for (std::size_t slot : slots) {
      const std::size_t start = 3 * slot + pick(rng, 2);
      const int kind = static_cast<int>(pick(rng, 3));  // 0 replace, 1 delete, 2 insert
      const std::size_t end = kind == 2 ? start : start + 1 + pick(rng, 2);
      std::string repl = "-NONE-";
      if (kind != 1) {
        repl.clear();
        const std::size_t r = 1 + pick(rng, 2);
        for (std::size_t i = 0; i < r; ++i) repl += (i ? " r" : "r") + std::to_string(s) + "_" + std::to_string(fresh++);
      }
      const char* type = kind == 0 ? "R:NOUN" : kind == 1 ? "U:DET" : "M:PREP";
      out << "A " << start << " " << end << "|||" << type << "|||" << repl << "|||REQUIRED|||-NONE-|||0\n";
    }
    out << "\n";
    if (edits) *edits += n_edits;
  }
  return out.str();
}

/// Single-edit instances labelled for every taxonomy in `taxonomies`.
inline Corpus synthetic_corpus(std::mt19937_64& rng, std::size_t n, const std::vector<Taxonomy>& taxonomies,
                               double other_rate = 0.1) {
  Corpus corpus;
  for (std::size_t i = 0; i < n; ++i) {
    SingleErrorInstance inst;
    char id[32];
    std::snprintf(id, sizeof id, "i%04zu", i);
    inst.id = id;
    const std::size_t len = 4 + pick(rng, 6);
    for (std::size_t t = 0; t < len; ++t) inst.source.push_back("t" + std::to_string(i) + "_" + std::to_string(t));
    const std::size_t start = pick(rng, len);
    inst.edit = {start, start + 1, {"fix" + std::to_string(i)}, "R:OTHER"};
    inst.target = apply_edits(inst.source, std::span(&inst.edit, 1));
    for (const auto& t : taxonomies) {
      const auto& leaves = t.leaf_labels();
      inst.gold[t.id()] = (i > 0 && unit(rng) < other_rate) ? std::string(kOtherLabel) : leaves[pick(rng, leaves.size())];
    }
    corpus.instances.push_back(std::move(inst));
  }
  return corpus;
}

}  // namespace taxeval::testing
