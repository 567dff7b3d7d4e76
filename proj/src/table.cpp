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

#include "taxeval/table.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <functional>
#include <sstream>

#include "taxeval/ablation.hpp"

namespace taxeval {

namespace {

constexpr std::array<std::string_view, 4> kKnown = {"POL73", "TUC74", "BRY17", "FEI23"};

std::size_t display_width(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xc0) != 0x80; }));
}

std::string pad(std::string_view s, std::size_t width) {
  std::string out(s);
  const auto w = display_width(s);
  if (w < width) out.append(width - w, ' ');
  return out;
}

std::string fixed3(std::optional<double> v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", *v);
  return buf;
}

struct Metric {
  std::string_view header;
  std::function<std::optional<double>(const Scores&)> get;
};

const std::vector<Metric>& metrics() {
  static const std::vector<Metric> m = {
      {"Exclusivity ↑", [](const Scores& s) { return s.exclusivity; }},
      {"Coverage ↑", [](const Scores& s) { return std::optional<double>(s.coverage); }},
      {"Balance ↑", [](const Scores& s) { return std::optional<double>(s.balance); }},
      {"Macro F1 ↑", [](const Scores& s) { return s.macro_f1; }},
      {"Micro F1 ↑", [](const Scores& s) { return s.micro_f1; }},
  };
  return m;
}

std::string trim_right(std::string s) {
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

std::vector<std::string> order_taxonomies(std::vector<std::string> ids) {
  auto rank = [](const std::string& id) {
    auto it = std::find(kKnown.begin(), kKnown.end(), id);
    return static_cast<std::size_t>(it - kKnown.begin());
  };
  std::sort(ids.begin(), ids.end(), [&](const std::string& a, const std::string& b) {
    const auto ra = rank(a), rb = rank(b);
    return ra != rb ? ra < rb : a < b;
  });
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::string render_metric_table(const std::vector<ModelRow>& rows) {
  std::vector<std::string> ids;
  std::size_t model_w = display_width("Model");
  for (const auto& row : rows) {
    model_w = std::max(model_w, display_width(row.model));
    for (const auto& r : row.reports) ids.push_back(r.taxonomy_id);
  }
  ids = order_taxonomies(std::move(ids));

  std::size_t cell_w = 5;
  for (const auto& id : ids) cell_w = std::max(cell_w, display_width(id));
  const std::size_t n = std::max<std::size_t>(ids.size(), 1);
  std::size_t group_w = n * cell_w + (n - 1) * 2;
  for (const auto& m : metrics()) group_w = std::max(group_w, display_width(m.header));

  std::ostringstream out;
  std::string line = pad("", model_w);
  for (const auto& m : metrics()) line += " | " + pad(m.header, group_w);
  out << trim_right(line) << "\n";

  line = pad("Model", model_w);
  for (std::size_t g = 0; g < metrics().size(); ++g) {
    std::string cells;
    for (std::size_t i = 0; i < ids.size(); ++i) cells += (i ? "  " : "") + pad(ids[i], cell_w);
    line += " | " + pad(cells, group_w);
  }
  out << trim_right(line) << "\n";

  line = std::string(model_w, '-');
  for (std::size_t g = 0; g < metrics().size(); ++g) line += "-+-" + std::string(group_w, '-');
  out << line << "\n";

  for (const auto& row : rows) {
    line = pad(row.model, model_w);
    for (const auto& m : metrics()) {
      std::string cells;
      for (std::size_t i = 0; i < ids.size(); ++i) {
        auto it = std::find_if(row.reports.begin(), row.reports.end(),
                               [&](const MetricReport& r) { return r.taxonomy_id == ids[i]; });
        const std::string v = it == row.reports.end() ? "-" : fixed3(m.get(it->scores));
        cells += (i ? "  " : "") + pad(v, cell_w);
      }
      line += " | " + pad(cells, group_w);
    }
    out << trim_right(line) << "\n";
  }
  return out.str();
}

std::string render_kappa_table(const std::vector<std::string>& taxonomy_ids, const std::vector<KappaRow>& rows) {
  std::size_t first_w = display_width("Average");
  for (const auto& r : rows) first_w = std::max(first_w, display_width(r.pair));
  std::size_t cell_w = 5;
  for (const auto& id : taxonomy_ids) cell_w = std::max(cell_w, display_width(id));

  auto emit = [&](std::ostringstream& out, std::string_view first, const std::vector<std::string>& cells) {
    std::string line = pad(first, first_w);
    for (const auto& c : cells) line += "  " + pad(c, cell_w);
    out << trim_right(line) << "\n";
  };

  std::ostringstream out;
  emit(out, "Annotators", taxonomy_ids);
  out << std::string(first_w + taxonomy_ids.size() * (cell_w + 2), '-') << "\n";
  std::vector<double> sum(taxonomy_ids.size(), 0.0);
  for (const auto& r : rows) {
    std::vector<std::string> cells;
    for (std::size_t i = 0; i < taxonomy_ids.size(); ++i) {
      const double v = i < r.per_taxonomy.size() ? r.per_taxonomy[i] : 0.0;
      sum[i] += v;
      cells.push_back(fixed3(v));
    }
    emit(out, r.pair, cells);
  }
  if (!rows.empty()) {
    std::vector<std::string> cells;
    for (double s : sum) cells.push_back(fixed3(s / static_cast<double>(rows.size())));
    emit(out, "Average", cells);
  }
  return out.str();
}

std::string render_ablation_table(const std::vector<AblationReport>& reports) {
  std::vector<std::string> ids;
  for (const auto& r : reports) ids.push_back(r.taxonomy_id);
  ids = order_taxonomies(std::move(ids));

  std::size_t first_w = display_width("Taxonomy");
  for (const auto& id : ids) first_w = std::max(first_w, display_width(id) + display_width(" (Fusion)"));

  std::ostringstream out;
  auto emit = [&](std::string_view first, std::string_view m, const std::vector<std::string>& cells) {
    std::string line = pad(first, first_w) + "  " + pad(m, 3);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      line += "  " + pad(cells[i], display_width(metrics()[i].header));
    }
    out << trim_right(line) << "\n";
  };

  std::vector<std::string> headers;
  for (const auto& m : metrics()) headers.emplace_back(m.header);
  emit("Taxonomy", "m", headers);
  std::size_t total = first_w + 5;
  for (const auto& h : headers) total += 2 + display_width(h);
  out << std::string(total, '-') << "\n";

  for (const auto& id : ids) {
    for (const auto& r : reports) {
      if (r.taxonomy_id != id) continue;
      for (int side = 0; side < 2; ++side) {
        const MetricReport& mr = side == 0 ? r.before : r.after;
        std::vector<std::string> cells;
        for (const auto& m : metrics()) cells.push_back(fixed3(m.get(mr.scores)));
        emit(side == 0 ? id : id + " (Fusion)", std::to_string(side == 0 ? r.m_before : r.m_after), cells);
      }
    }
  }
  return out.str();
}

}  // namespace taxeval
