//
// Copyright 2026 The Augmenta Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Report emission. Method ids of the form "group:name" are grouped for the
// Average and Best rows. Output is a pure function of the input files.

#ifndef AUGMENTA_REPORT_HPP_
#define AUGMENTA_REPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "augmenta/datamodel.hpp"
#include "augmenta/error.hpp"
#include "augmenta/evalharness.hpp"
#include "augmenta/textcore.hpp"

namespace augmenta {

struct ReportFiles {
  std::string summary_csv;
  std::string per_task_csv;
  std::string augment_stats_csv;
  std::string report_txt;
};

namespace detail {

inline std::string fmt_full(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_pct(double v) {
  if (std::isnan(v)) return "-";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
  return buf;
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string method_group(std::string_view id) {
  const auto c = id.find(':');
  return c == std::string_view::npos ? std::string() : std::string(id.substr(0, c));
}

inline double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return std::nan("");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double std_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size()));
}

/// Linear interpolation between closest ranks.
inline double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) return std::nan("");
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

inline std::string pad(std::string s, std::size_t w, bool left = true) {
  if (s.size() >= w) return s;
  return left ? s + std::string(w - s.size(), ' ') : std::string(w - s.size(), ' ') + s;
}

}  // namespace detail

struct AugmentStats {
  std::string method_id;
  std::size_t n = 0;
  double words_mean = 0, words_std = 0, q25 = 0, q50 = 0, q75 = 0;
  double distance_mean = 0;
};

inline std::vector<AugmentStats> augment_stats(const std::vector<AugmentationRecord>& recs) {
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by;
  for (const auto& r : recs) {
    auto& [words, dist] = by[r.method_id];
    words.push_back(static_cast<double>(tokenize(r.augmented_input).size()));
    dist.push_back(1.0 - rouge_l(r.augmented_input, r.original.input));
  }
  std::vector<AugmentStats> out;
  for (const auto& [id, v] : by) {
    out.push_back({id, v.first.size(), detail::mean_of(v.first), detail::std_of(v.first),
                   detail::quantile(v.first, 0.25), detail::quantile(v.first, 0.5),
                   detail::quantile(v.first, 0.75), detail::mean_of(v.second)});
  }
  return out;
}

inline ReportFiles render_report(const std::vector<EvalResult>& results,
                                 const std::vector<AugmentationRecord>& records = {}) {
  if (results.empty()) throw Error(ErrorCode::kNoResults, "no evaluation results");
  // cell[(method, task)] = per-seed values
  std::map<std::pair<std::string, std::string>, std::vector<double>> cells;
  std::map<std::string, std::string> metric_of;
  std::set<std::string> tasks;
  std::vector<std::string> methods;
  for (const auto& r : results) {
    cells[{r.method_id, r.task_name}].push_back(r.value);
    metric_of[r.task_name] = r.metric;
    tasks.insert(r.task_name);
    if (std::find(methods.begin(), methods.end(), r.method_id) == methods.end()) {
      methods.push_back(r.method_id);
    }
  }
  std::stable_sort(methods.begin(), methods.end(), [](const auto& a, const auto& b) {
    return std::make_pair(detail::method_group(a), a) < std::make_pair(detail::method_group(b), b);
  });
  const std::vector<std::string> task_list(tasks.begin(), tasks.end());

  struct Row {
    std::string label;
    std::vector<double> values;  // per task, then macro average
  };
  auto method_row = [&](const std::string& m) {
    Row row{m, {}};
    std::vector<double> present;
    for (const auto& t : task_list) {
      auto it = cells.find({m, t});
      const double v = it == cells.end() ? std::nan("") : detail::mean_of(it->second);
      row.values.push_back(v);
      if (!std::isnan(v)) present.push_back(v);
    }
    row.values.push_back(detail::mean_of(present));
    return row;
  };

  std::vector<Row> rows;
  std::map<std::string, std::vector<Row>> grouped;
  for (const auto& m : methods) {
    rows.push_back(method_row(m));
    grouped[detail::method_group(m)].push_back(rows.back());
  }
  for (const auto& [g, members] : grouped) {
    if (g.empty() || members.size() < 2) continue;
    const std::size_t w = task_list.size() + 1;
    Row avg{g + ":Average", std::vector<double>(w, 0.0)};
    Row per_task{g + ":Best (per task)", std::vector<double>(w, -INFINITY)};
    for (std::size_t c = 0; c < w; ++c) {
      std::vector<double> col;
      for (const auto& r : members) {
        if (!std::isnan(r.values[c])) col.push_back(r.values[c]);
      }
      avg.values[c] = detail::mean_of(col);
      per_task.values[c] = col.empty() ? std::nan("") : *std::max_element(col.begin(), col.end());
    }
    // The per-task column maxima average into the last column.
    std::vector<double> tv(per_task.values.begin(), per_task.values.end() - 1);
    std::erase_if(tv, [](double x) { return std::isnan(x); });
    per_task.values.back() = detail::mean_of(tv);
    const Row* single = &members.front();
    for (const auto& r : members) {
      if (r.values.back() > single->values.back()) single = &r;
    }
    Row best{g + ":Best (single)", single->values};
    rows.push_back(avg);
    rows.push_back(best);
    rows.push_back(per_task);
  }

  ReportFiles f;
  f.summary_csv = "method";
  for (const auto& t : task_list) f.summary_csv += "," + detail::csv_field(t);
  f.summary_csv += ",macro_average\n";
  for (const auto& r : rows) {
    f.summary_csv += detail::csv_field(r.label);
    for (double v : r.values) f.summary_csv += "," + detail::fmt_full(v);
    f.summary_csv += "\n";
  }

  f.per_task_csv = "task,method,metric,n_seeds,mean,std\n";
  for (const auto& t : task_list) {
    for (const auto& m : methods) {
      auto it = cells.find({m, t});
      if (it == cells.end()) continue;
      f.per_task_csv += detail::csv_field(t) + "," + detail::csv_field(m) + "," +
                        metric_of[t] + "," + std::to_string(it->second.size()) + "," +
                        detail::fmt_full(detail::mean_of(it->second)) + "," +
                        detail::fmt_full(detail::std_of(it->second)) + "\n";
    }
  }

  f.augment_stats_csv =
      "method,n_records,words_mean,words_std,words_q25,words_q50,words_q75,"
      "distance_to_original\n";
  for (const auto& s : augment_stats(records)) {
    f.augment_stats_csv += detail::csv_field(s.method_id) + "," + std::to_string(s.n) + "," +
                           detail::fmt_full(s.words_mean) + "," + detail::fmt_full(s.words_std) +
                           "," + detail::fmt_full(s.q25) + "," + detail::fmt_full(s.q50) + "," +
                           detail::fmt_full(s.q75) + "," + detail::fmt_full(s.distance_mean) +
                           "\n";
  }

  std::size_t label_w = 6;
  for (const auto& r : rows) label_w = std::max(label_w, r.label.size());
  std::size_t col_w = 8;
  for (const auto& t : task_list) col_w = std::max(col_w, t.size());
  f.report_txt = detail::pad("method", label_w + 2);
  for (const auto& t : task_list) f.report_txt += detail::pad(t, col_w + 2, false);
  f.report_txt += detail::pad("avg", col_w + 2, false) + "\n";
  std::string last_group;
  for (const auto& r : rows) {
    const auto g = detail::method_group(r.label);
    if (g != last_group) {
      f.report_txt += std::string(label_w + 2 + (col_w + 2) * (task_list.size() + 1), '-') + "\n";
      last_group = g;
    }
    f.report_txt += detail::pad(r.label, label_w + 2);
    for (double v : r.values) f.report_txt += detail::pad(detail::fmt_pct(v), col_w + 2, false);
    f.report_txt += "\n";
  }
  return f;
}

/// Reads dir/results.jsonl and dir/augmented/*.jsonl, writes the four report
/// files into dir.
inline ReportFiles emit_report(const fs::path& dir) {
  const auto results_file = dir / "results.jsonl";
  if (!fs::exists(results_file)) {
    throw Error(ErrorCode::kNoResults, results_file.string() + " not found");
  }
  auto results = load_results(results_file);
  sort_results(results);
  std::vector<AugmentationRecord> records;
  if (fs::is_directory(dir / "augmented")) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir / "augmented")) {
      if (e.path().extension() == ".jsonl") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
      auto rs = load_records(p);
      records.insert(records.end(), rs.begin(), rs.end());
    }
  }
  auto f = render_report(results, records);
  detail::write_file_atomic(dir / "summary.csv", f.summary_csv);
  detail::write_file_atomic(dir / "per_task.csv", f.per_task_csv);
  detail::write_file_atomic(dir / "augment_stats.csv", f.augment_stats_csv);
  detail::write_file_atomic(dir / "report.txt", f.report_txt);
  return f;
}

}  // namespace augmenta

#endif  // AUGMENTA_REPORT_HPP_
