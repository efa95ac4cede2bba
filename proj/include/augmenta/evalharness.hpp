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

// Target models, metrics, the multi-seed evaluation protocol and reward
// generation for scorer training.

#ifndef AUGMENTA_EVALHARNESS_HPP_
#define AUGMENTA_EVALHARNESS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "augmenta/augmenters.hpp"
#include "augmenta/backends.hpp"
#include "augmenta/datamodel.hpp"
#include "augmenta/error.hpp"
#include "augmenta/instructgen.hpp"
#include "augmenta/selector.hpp"
#include "augmenta/textcore.hpp"

namespace augmenta {

class TargetModel {
 public:
  virtual ~TargetModel() = default;
  virtual void fit(std::span<const TrainingPair> pairs) = 0;
  /// One finite score per candidate; higher is more probable.
  virtual std::vector<double> candidate_scores(
      std::string_view input, std::span<const std::string> candidates) const = 0;
};

using ModelFactory = std::function<std::unique_ptr<TargetModel>(std::uint64_t seed)>;

struct ReferenceModelConfig {
  std::uint32_t dim = 1u << 15;
  int n_gram_max = 2;
  double lr = 0.1;
  int epochs = 20;
};

/// Linear scorer over hashed (input n-gram x candidate token) features plus
/// candidate bias features, trained with softmax cross-entropy over each
/// example's candidate set.
class ReferenceTargetModel : public TargetModel {
 public:
  explicit ReferenceTargetModel(std::uint64_t seed = 0,
                                ReferenceModelConfig cfg = {})
      : cfg_(cfg), seed_(seed), weights_(cfg.dim, 0.0) {}

  SparseVector pair_features(const TokenSeq& grams,
                             std::string_view candidate) const {
    const TokenSeq ctoks = tokenize(candidate);
    std::vector<std::pair<std::uint32_t, double>> raw;
    std::string key;
    auto add = [&](std::string_view prefix, std::string_view a, std::string_view b) {
      key.assign(prefix);
      key.append(a);
      key.push_back('\x1f');
      key.append(b);
      raw.push_back(hash_bucket(key, cfg_.dim));
    };
    add("B|", candidate, "");
    for (const auto& c : ctoks) {
      add("b|", c, "");
      for (const auto& g : grams) add("p|", g, c);
    }
    std::sort(raw.begin(), raw.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    SparseVector out;
    for (const auto& [i, v] : raw) {
      if (!out.entries.empty() && out.entries.back().first == i) {
        out.entries.back().second += v;
      } else {
        out.entries.emplace_back(i, v);
      }
    }
    double norm = 0.0;
    for (const auto& e : out.entries) norm += e.second * e.second;
    if (norm > 0.0) {
      norm = std::sqrt(norm);
      for (auto& e : out.entries) e.second /= norm;
    }
    return out;
  }

  void fit(std::span<const TrainingPair> pairs) override {
    struct Item {
      std::vector<SparseVector> xs;
      std::size_t gold;
    };
    std::vector<Item> items;
    for (const auto& p : pairs) {
      if (p.candidates.empty()) continue;
      auto it = std::find(p.candidates.begin(), p.candidates.end(), p.output);
      if (it == p.candidates.end()) continue;
      const auto grams = input_grams(p.input);
      Item item{{}, static_cast<std::size_t>(it - p.candidates.begin())};
      for (const auto& c : p.candidates) item.xs.push_back(pair_features(grams, c));
      items.push_back(std::move(item));
    }
    RngStream rng(seed_);
    std::vector<std::size_t> order(items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (int e = 0; e < cfg_.epochs; ++e) {
      rng.shuffle(order);
      for (auto idx : order) {
        const auto& item = items[idx];
        std::vector<double> q;
        for (const auto& x : item.xs) q.push_back(dot(weights_, x));
        auto g = softmax(q);
        g[item.gold] -= 1.0;
        for (std::size_t j = 0; j < item.xs.size(); ++j) {
          for (const auto& [i, v] : item.xs[j].entries) weights_[i] -= cfg_.lr * g[j] * v;
        }
      }
    }
  }

  std::vector<double> candidate_scores(
      std::string_view input, std::span<const std::string> candidates) const override {
    const auto grams = input_grams(input);
    std::vector<double> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) out.push_back(dot(weights_, pair_features(grams, c)));
    return out;
  }

  const std::vector<double>& weights() const { return weights_; }

 private:
  TokenSeq input_grams(std::string_view input) const {
    const TokenSeq toks = tokenize(input);
    TokenSeq grams;
    for (int n = 1; n <= cfg_.n_gram_max; ++n) {
      const auto w = static_cast<std::size_t>(n);
      for (std::size_t i = 0; i + w <= toks.size(); ++i) {
        std::string g = toks[i];
        for (std::size_t k = 1; k < w; ++k) g += " " + toks[i + k];
        grams.push_back(std::move(g));
      }
    }
    return grams;
  }

  ReferenceModelConfig cfg_;
  std::uint64_t seed_;
  std::vector<double> weights_;
};

inline ModelFactory reference_factory(ReferenceModelConfig cfg = {}) {
  return [cfg](std::uint64_t seed) {
    return std::make_unique<ReferenceTargetModel>(seed, cfg);
  };
}

/// Original pairs plus one pair per augmentation record, shuffled with
/// `seed`, handed to fit() once.
inline std::vector<TrainingPair> training_set(const TaskDataset& original,
                                              const std::vector<AugmentationRecord>& augmented,
                                              std::uint64_t seed) {
  if (original.train.empty()) {
    throw Error(ErrorCode::kInsufficientExamples,
                original.task_name + ": empty training split");
  }
  std::vector<TrainingPair> pairs;
  for (const auto& ex : original.train) pairs.push_back(training_pair(ex));
  for (const auto& r : augmented) pairs.push_back(training_pair(r));
  RngStream(seed).shuffle(pairs);
  return pairs;
}

inline void train_target(TargetModel& model, const TaskDataset& original,
                         const std::vector<AugmentationRecord>& augmented,
                         std::uint64_t seed) {
  const auto pairs = training_set(original, augmented, seed);
  model.fit(pairs);
}

inline std::size_t predict(const TargetModel& model, std::string_view x,
                           std::span<const std::string> candidates) {
  if (candidates.empty()) {
    throw Error(ErrorCode::kMissingCandidates, "predict needs candidates");
  }
  const auto s = model.candidate_scores(x, candidates);
  if (s.size() != candidates.size()) {
    throw Error(ErrorCode::kLengthMismatch, "one score per candidate expected");
  }
  return argmax_lowest(s);
}

// ---------------------------------------------------------------------------
// Metrics

namespace detail {

inline void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kLengthMismatch,
                "gold has " + std::to_string(a) + " labels, pred has " + std::to_string(b));
  }
  if (a == 0) throw Error(ErrorCode::kInvalidArgument, "metrics need at least one label");
}

}  // namespace detail

inline double macro_f1(std::span<const std::string> gold,
                       std::span<const std::string> pred) {
  detail::check_lengths(gold.size(), pred.size());
  std::set<std::string> classes(gold.begin(), gold.end());
  classes.insert(pred.begin(), pred.end());
  double total = 0.0;
  for (const auto& c : classes) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      const bool g = gold[i] == c;
      const bool p = pred[i] == c;
      tp += g && p;
      fp += !g && p;
      fn += g && !p;
    }
    const double prec = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    const double rec = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    total += prec + rec > 0.0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
  }
  return total / static_cast<double>(classes.size());
}

inline double accuracy(std::span<const std::string> gold,
                       std::span<const std::string> pred) {
  detail::check_lengths(gold.size(), pred.size());
  std::size_t hit = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) hit += trim(gold[i]) == trim(pred[i]);
  return static_cast<double>(hit) / static_cast<double>(gold.size());
}

inline std::string_view metric_for(TaskKind kind) {
  return kind == TaskKind::kClassification ? "macro_f1" : "accuracy";
}

// ---------------------------------------------------------------------------
// Evaluation protocol

struct EvalResult {
  std::string task_name;
  std::string method_id;
  std::uint64_t seed = 0;
  std::string metric;
  double value = 0.0;
  std::size_t n_test = 0;

  bool operator==(const EvalResult&) const = default;
};

inline const std::vector<std::uint64_t>& default_seeds() {
  static const std::vector<std::uint64_t> kSeeds = {13, 21, 42, 87, 100};
  return kSeeds;
}

enum class EvalSplit { kTest, kDev };

struct EvalOptions {
  std::size_t k = 16;
  std::vector<std::uint64_t> seeds = default_seeds();
  EvalSplit split = EvalSplit::kTest;
  ApplyOptions apply;
  bool keep_records = false;
};

struct EvalSummary {
  std::vector<EvalResult> results;
  std::vector<std::string> errors;  // one per failed seed
  std::vector<AugmentationRecord> records;  // filled when keep_records
  double mean = 0.0;
};

/// Scores a fitted model on a split with the task's metric.
inline double score_split(const TargetModel& model, const TaskDataset& task,
                          const std::vector<Example>& split) {
  std::vector<std::string> gold;
  std::vector<std::string> pred;
  for (const auto& ex : split) {
    gold.push_back(ex.output);
    pred.push_back(ex.candidates[predict(model, ex.input, ex.candidates)]);
  }
  return task.kind == TaskKind::kClassification ? macro_f1(gold, pred)
                                                : accuracy(gold, pred);
}

/// One result per seed that succeeded. `method` empty means no augmentation.
/// Throws AllSeedsFailed only when no seed produced a result.
inline EvalSummary evaluate_task(const TaskDataset& task,
                                 const std::optional<AugmenterSpec>& method,
                                 const ModelFactory& factory,
                                 const EvalOptions& opts = {},
                                 LlmClient* client = nullptr,
                                 const std::string& method_label = {}) {
  const auto& split = opts.split == EvalSplit::kDev && !task.dev.empty() ? task.dev : task.test;
  if (split.empty()) {
    throw Error(ErrorCode::kInsufficientExamples, task.task_name + ": empty evaluation split");
  }
  for (const auto& ex : split) {
    if (ex.candidates.empty()) {
      throw Error(ErrorCode::kMissingCandidates,
                  task.task_name + ": evaluation example without candidates");
    }
  }
  const std::string label =
      !method_label.empty() ? method_label : (method ? method->method_id() : "original");
  EvalSummary out;
  for (auto seed : opts.seeds) {
    try {
      const TaskDataset few = sample_few_shot(task, opts.k, seed);
      std::vector<AugmentationRecord> recs;
      if (method) {
        AugmenterSpec spec = *method;
        spec.seed = derive_seed(method->seed, seed);
        recs = apply_to_dataset(spec, few, client, opts.apply);
      }
      auto model = factory(derive_seed(seed, 0x746172676574ULL));
      train_target(*model, few, recs, seed);
      out.results.push_back({task.task_name, label, seed,
                             std::string(metric_for(task.kind)),
                             score_split(*model, task, split), split.size()});
      if (opts.keep_records) {
        for (auto& r : recs) {
          r.method_id = label;
          out.records.push_back(std::move(r));
        }
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kBudget) throw;
      out.errors.push_back("seed " + std::to_string(seed) + ": " + e.what());
    }
  }
  if (out.results.empty()) {
    throw Error(ErrorCode::kAllSeedsFailed,
                task.task_name + "/" + label + ": " +
                    (out.errors.empty() ? std::string("no seeds") : out.errors.front()));
  }
  double total = 0.0;
  for (const auto& r : out.results) total += r.value;
  out.mean = total / static_cast<double>(out.results.size());
  return out;
}

struct RewardOptions {
  EvalOptions eval;
  /// Instructions rewarded per task; 0 means the whole pool.
  std::size_t per_task = 0;
  std::uint64_t seed = 0;
  double rate = 0.1;
};

/// Reward of instruction j on a task is the mean metric of a target model
/// trained on D plus D'_j, measured on the dev split when present.
inline std::vector<RewardRecord> generate_rewards(
    const std::vector<TaskDataset>& tasks, const InstructionPool& pool,
    const ModelFactory& factory, LlmClient& client, RewardOptions opts,
    std::vector<std::string>* skipped = nullptr) {
  if (pool.size() == 0) throw Error(ErrorCode::kInvalidArgument, "empty pool");
  opts.eval.split = EvalSplit::kDev;
  std::vector<RewardRecord> out;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto& task = tasks[t];
    std::vector<std::size_t> items;
    if (opts.per_task == 0 || opts.per_task >= pool.size()) {
      for (std::size_t i = 0; i < pool.size(); ++i) items.push_back(i);
    } else {
      items = RngStream(derive_seed(opts.seed, t)).sample_indices(pool.size(), opts.per_task);
      std::sort(items.begin(), items.end());
    }
    for (auto i : items) {
      AugmenterSpec spec;
      spec.method = pool.instructions[i];
      spec.rate = opts.rate;
      spec.seed = derive_seed(opts.seed, 0x10000 + i);
      try {
        const auto s = evaluate_task(task, spec, factory, opts.eval, &client);
        out.push_back({task.task_name, pool.instructions[i].name, s.mean, opts.seed});
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kBudget) throw;
        if (skipped) skipped->push_back(task.task_name + "/" + pool.instructions[i].name +
                                        ": " + e.what());
      }
    }
  }
  return out;
}

inline double macro_average(const std::vector<EvalResult>& results) {
  if (results.empty()) throw Error(ErrorCode::kEmptyGroup, "no results to average");
  std::map<std::string, std::pair<double, int>> by_task;
  for (const auto& r : results) {
    auto& c = by_task[r.task_name];
    c.first += r.value;
    c.second += 1;
  }
  double total = 0.0;
  for (const auto& [t, c] : by_task) total += c.first / c.second;
  return total / static_cast<double>(by_task.size());
}

// ---------------------------------------------------------------------------
// Results files

inline ordered_json result_to_json(const EvalResult& r) {
  ordered_json o;
  o["task"] = r.task_name;
  o["method"] = r.method_id;
  o["seed"] = r.seed;
  o["metric"] = r.metric;
  o["value"] = r.value;
  o["n_test"] = r.n_test;
  return o;
}

inline void sort_results(std::vector<EvalResult>& rs) {
  std::stable_sort(rs.begin(), rs.end(), [](const auto& a, const auto& b) {
    return std::tie(a.task_name, a.method_id, a.seed) <
           std::tie(b.task_name, b.method_id, b.seed);
  });
}

inline std::string results_to_jsonl(const std::vector<EvalResult>& rs) {
  std::string out;
  for (const auto& r : rs) out += result_to_json(r).dump() + "\n";
  return out;
}

inline std::vector<EvalResult> load_results(const fs::path& path) {
  std::vector<EvalResult> out;
  const auto lines = detail::split_lines(detail::read_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    try {
      const json o = json::parse(lines[i]);
      out.push_back({o.at("task").get<std::string>(), o.at("method").get<std::string>(),
                     o.at("seed").get<std::uint64_t>(), o.at("metric").get<std::string>(),
                     o.at("value").get<double>(), o.at("n_test").get<std::size_t>()});
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedRecord,
                  detail::where(path, i + 1) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace augmenta

#endif  // AUGMENTA_EVALHARNESS_HPP_
