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

// Task-informed instruction selection: a linear scorer over hashed
// (instruction, task examples) features trained with a listwise
// cross-entropy, argmax inference, and three baseline selectors.

#ifndef AUGMENTA_SELECTOR_HPP_
#define AUGMENTA_SELECTOR_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "augmenta/backends.hpp"
#include "augmenta/datamodel.hpp"
#include "augmenta/digest.hpp"
#include "augmenta/error.hpp"
#include "augmenta/instructgen.hpp"
#include "augmenta/textcore.hpp"

namespace augmenta {

struct TaskDescriptor {
  std::string task_name;
  std::string target_model_name;
  std::vector<std::string> rep_examples;

  std::size_t m() const { return rep_examples.size(); }
};

enum class DescriptorSource { kTrain, kDev };

/// m inputs sampled without replacement from the chosen split, kept in file
/// order.
inline TaskDescriptor make_descriptor(const TaskDataset& task,
                                      std::string model_name, std::size_t m,
                                      std::uint64_t seed,
                                      DescriptorSource src = DescriptorSource::kTrain) {
  const auto& xs = src == DescriptorSource::kDev && !task.dev.empty() ? task.dev
                                                                      : task.train;
  if (m == 0 || xs.size() < m) {
    throw Error(ErrorCode::kInsufficientExamples,
                task.task_name + ": descriptor needs " + std::to_string(m) +
                    " examples, have " + std::to_string(xs.size()));
  }
  RngStream rng(seed);
  auto idx = rng.sample_indices(xs.size(), m);
  std::sort(idx.begin(), idx.end());
  TaskDescriptor d{task.task_name, std::move(model_name), {}};
  for (auto i : idx) d.rep_examples.push_back(xs[i].input);
  return d;
}

inline std::string build_scoring_prompt(const TaskDescriptor& desc,
                                        const Instruction& ins) {
  std::string p = "Given the dataset for task " + desc.task_name +
                  " and the instruction data, determine if this is a suitable "
                  "instruction to address the task for model " +
                  desc.target_model_name + ". Task Dataset: ";
  p += join(desc.rep_examples, "\n");
  p += " Instruction: " + render_instruction(ins) +
       ". Is this instruction appropriate?";
  return p;
}

// ---------------------------------------------------------------------------
// Features

struct FeatureConfig {
  int n_gram_max = 2;
  std::uint32_t dim = 4096;

  std::size_t width() const { return 3 * static_cast<std::size_t>(dim) + 3; }
  bool operator==(const FeatureConfig&) const = default;
};

namespace detail {

inline void l2_normalize(SparseVector& v) {
  double norm = 0.0;
  for (const auto& [i, x] : v.entries) norm += x * x;
  if (norm <= 0.0) return;
  norm = std::sqrt(norm);
  for (auto& [i, x] : v.entries) x /= norm;
}

inline double jaccard(const TokenSeq& a, const TokenSeq& b) {
  const std::set<std::string> sa(a.begin(), a.end());
  const std::set<std::string> sb(b.begin(), b.end());
  std::size_t inter = 0;
  for (const auto& t : sa) inter += sb.count(t);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace detail

/// Layout: [instruction block | examples block | product block | 3 scalars].
/// Hashed blocks are L2-normalized so long texts do not dominate.
inline SparseVector featurize_sparse(const TaskDescriptor& desc,
                                     const Instruction& ins,
                                     const FeatureConfig& cfg = {}) {
  const TokenSeq body = tokenize(ins.body);
  const TokenSeq exs = tokenize(join(desc.rep_examples, "\n"));
  SparseVector a = hash_features(body, cfg.n_gram_max, cfg.dim);
  SparseVector b = hash_features(exs, cfg.n_gram_max, cfg.dim);
  detail::l2_normalize(a);
  detail::l2_normalize(b);
  SparseVector out;
  out.entries = a.entries;
  for (const auto& [i, x] : b.entries) out.entries.emplace_back(i + cfg.dim, x);
  // Both blocks are sorted, so a merge finds the shared buckets.
  std::size_t p = 0;
  std::size_t q = 0;
  while (p < a.entries.size() && q < b.entries.size()) {
    if (a.entries[p].first < b.entries[q].first) {
      ++p;
    } else if (b.entries[q].first < a.entries[p].first) {
      ++q;
    } else {
      out.entries.emplace_back(a.entries[p].first + 2 * cfg.dim,
                               a.entries[p].second * b.entries[q].second);
      ++p;
      ++q;
    }
  }
  const std::uint32_t s = 3 * cfg.dim;
  out.entries.emplace_back(s, rouge_l(body, exs));
  out.entries.emplace_back(s + 1, static_cast<double>(body.size()) / 100.0);
  out.entries.emplace_back(s + 2, detail::jaccard(body, exs));
  return out;
}

inline std::vector<double> featurize_pair(const TaskDescriptor& desc,
                                          const Instruction& ins,
                                          const FeatureConfig& cfg = {}) {
  return featurize_sparse(desc, ins, cfg).to_dense(
      static_cast<std::uint32_t>(cfg.width()));
}

// ---------------------------------------------------------------------------
// Scorer state

struct ScorerState {
  std::vector<double> weights;
  double bias = 0.0;
  FeatureConfig feature_config;
  std::string trained_on;

  static ScorerState zeros(const FeatureConfig& cfg, std::string trained_on = {}) {
    return {std::vector<double>(cfg.width(), 0.0), 0.0, cfg, std::move(trained_on)};
  }

  void check() const {
    if (weights.size() != feature_config.width()) {
      throw Error(ErrorCode::kDimMismatch,
                  "scorer has " + std::to_string(weights.size()) +
                      " weights, feature config needs " +
                      std::to_string(feature_config.width()));
    }
  }

  bool operator==(const ScorerState&) const = default;
};

inline double dot(const std::vector<double>& w, const SparseVector& x) {
  double s = 0.0;
  for (const auto& [i, v] : x.entries) s += w[i] * v;
  return s;
}

inline double score(const ScorerState& state, const TaskDescriptor& desc,
                    const Instruction& ins) {
  state.check();
  const double q =
      dot(state.weights, featurize_sparse(desc, ins, state.feature_config)) +
      state.bias;
  if (!std::isfinite(q)) {
    throw Error(ErrorCode::kNonFiniteLoss, "non-finite score");
  }
  return q;
}

inline std::string scorer_to_json(const ScorerState& s) {
  s.check();
  std::string bytes(s.weights.size() * 8, '\0');
  for (std::size_t i = 0; i < s.weights.size(); ++i) {
    auto u = std::bit_cast<std::uint64_t>(s.weights[i]);
    for (int b = 0; b < 8; ++b) {
      bytes[i * 8 + static_cast<std::size_t>(b)] =
          static_cast<char>((u >> (8 * b)) & 0xFF);
    }
  }
  ordered_json doc;
  doc["weights"] = base64_encode(
      reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
  doc["bias"] = s.bias;
  doc["feature_config"] = {{"n_gram_max", s.feature_config.n_gram_max},
                           {"dim", s.feature_config.dim}};
  doc["trained_on"] = s.trained_on;
  return doc.dump(2) + "\n";
}

inline ScorerState scorer_from_json(std::string_view text) {
  ScorerState s;
  try {
    const json doc = json::parse(text);
    s.bias = doc.at("bias").get<double>();
    s.feature_config.n_gram_max = doc.at("feature_config").at("n_gram_max").get<int>();
    s.feature_config.dim = doc.at("feature_config").at("dim").get<std::uint32_t>();
    s.trained_on = doc.value("trained_on", std::string{});
    const auto bytes = base64_decode(doc.at("weights").get<std::string>());
    if (bytes.size() % 8 != 0) {
      throw Error(ErrorCode::kMalformedRecord, "weights are not 8-byte aligned");
    }
    s.weights.resize(bytes.size() / 8);
    for (std::size_t i = 0; i < s.weights.size(); ++i) {
      std::uint64_t u = 0;
      for (int b = 7; b >= 0; --b) u = (u << 8) | bytes[i * 8 + static_cast<std::size_t>(b)];
      s.weights[i] = std::bit_cast<double>(u);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, std::string("scorer: ") + e.what());
  }
  s.check();
  for (double w : s.weights) {
    if (!std::isfinite(w)) throw Error(ErrorCode::kMalformedRecord, "non-finite weight");
  }
  return s;
}

inline ScorerState load_scorer(const fs::path& path) {
  return scorer_from_json(detail::read_file(path));
}

// ---------------------------------------------------------------------------
// Listwise loss

/// Highest reward, lowest index on ties. Throws DegenerateBatch when all
/// rewards agree within 1e-12.
inline std::size_t reward_winner(std::span<const double> rewards) {
  if (rewards.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "listwise loss needs n >= 2");
  }
  // max_element keeps the first maximum; minmax_element would keep the last.
  const auto hi = std::max_element(rewards.begin(), rewards.end());
  const auto lo = std::min_element(rewards.begin(), rewards.end());
  if (*hi - *lo <= 1e-12) {
    throw Error(ErrorCode::kDegenerateBatch, "all rewards are equal");
  }
  return static_cast<std::size_t>(hi - rewards.begin());
}

inline std::vector<double> softmax(std::span<const double> q) {
  const double mx = *std::max_element(q.begin(), q.end());
  std::vector<double> p(q.size());
  double z = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) z += (p[i] = std::exp(q[i] - mx));
  for (auto& x : p) x /= z;
  return p;
}

inline double listwise_loss(std::span<const double> q,
                            std::span<const double> rewards) {
  if (q.size() != rewards.size()) {
    throw Error(ErrorCode::kLengthMismatch, "scores and rewards differ in length");
  }
  const std::size_t w = reward_winner(rewards);
  const double mx = *std::max_element(q.begin(), q.end());
  double z = 0.0;
  for (double x : q) z += std::exp(x - mx);
  return -(q[w] - mx - std::log(z));
}

/// dL/dq_j = softmax(q)_j - [j == winner].
inline std::vector<double> loss_gradient_q(std::span<const double> q,
                                           std::span<const double> rewards) {
  if (q.size() != rewards.size()) {
    throw Error(ErrorCode::kLengthMismatch, "scores and rewards differ in length");
  }
  const std::size_t w = reward_winner(rewards);
  auto g = softmax(q);
  g[w] -= 1.0;
  return g;
}

struct ScorerGradient {
  std::vector<double> weights;
  double bias = 0.0;
};

/// Chain rule through q_j = w . x_j + b.
inline ScorerGradient loss_gradient(std::span<const double> q,
                                    std::span<const double> rewards,
                                    std::span<const SparseVector> features,
                                    std::size_t width) {
  const auto gq = loss_gradient_q(q, rewards);
  if (features.size() != q.size()) {
    throw Error(ErrorCode::kLengthMismatch, "one feature vector per item");
  }
  ScorerGradient g{std::vector<double>(width, 0.0), 0.0};
  for (std::size_t j = 0; j < gq.size(); ++j) {
    for (const auto& [i, v] : features[j].entries) g.weights[i] += gq[j] * v;
    g.bias += gq[j];
  }
  return g;
}

// ---------------------------------------------------------------------------
// Training

struct RewardRecord {
  std::string task_name;
  std::string instruction_name;
  double reward = 0.0;
  std::uint64_t seed = 0;
};

inline ordered_json reward_to_json(const RewardRecord& r) {
  ordered_json o;
  o["task"] = r.task_name;
  o["instruction"] = r.instruction_name;
  o["reward"] = r.reward;
  o["seed"] = r.seed;
  return o;
}

inline std::string rewards_to_jsonl(const std::vector<RewardRecord>& rs) {
  std::string out;
  for (const auto& r : rs) out += reward_to_json(r).dump() + "\n";
  return out;
}

inline std::vector<RewardRecord> load_rewards(const fs::path& path) {
  std::vector<RewardRecord> out;
  const auto lines = detail::split_lines(detail::read_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    try {
      const json o = json::parse(lines[i]);
      out.push_back({o.at("task").get<std::string>(),
                     o.at("instruction").get<std::string>(),
                     o.at("reward").get<double>(), o.value("seed", std::uint64_t{0})});
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedRecord,
                  detail::where(path, i + 1) + ": " + e.what());
    }
  }
  return out;
}

struct TrainHyper {
  std::size_t n = 2;
  std::size_t m = 2;
  double lr = 0.05;
  std::size_t epochs = 100;
  std::size_t patience = 20;
  std::size_t batch_size = 1;
  FeatureConfig features;
  std::string model_name = "target-125m";
};

struct TrainReport {
  std::vector<double> epoch_loss;     // fixed-set loss; [0] is before training
  std::vector<double> dev_quality;    // per epoch
  std::size_t best_epoch = 0;
  std::size_t skipped_batches = 0;
};

namespace detail {

/// Rewards of one task keyed by pool index; several records for the same
/// pair are averaged.
struct TaskRewards {
  std::size_t task_index = 0;
  std::vector<std::size_t> items;
  std::vector<double> rewards;
};

inline std::vector<TaskRewards> group_rewards(const std::vector<RewardRecord>& records,
                                              const InstructionPool& pool,
                                              const std::vector<TaskDataset>& tasks) {
  std::map<std::string, std::size_t> ins_index;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    ins_index.emplace(pool.instructions[i].name, i);
  }
  std::map<std::string, std::size_t> task_index;
  for (std::size_t t = 0; t < tasks.size(); ++t) task_index.emplace(tasks[t].task_name, t);
  std::map<std::size_t, std::map<std::size_t, std::pair<double, int>>> acc;
  for (const auto& r : records) {
    auto ti = task_index.find(r.task_name);
    auto ii = ins_index.find(r.instruction_name);
    if (ti == task_index.end() || ii == ins_index.end()) continue;
    auto& cell = acc[ti->second][ii->second];
    cell.first += r.reward;
    cell.second += 1;
  }
  std::vector<TaskRewards> out;
  for (const auto& [t, cells] : acc) {
    TaskRewards tr{t, {}, {}};
    for (const auto& [i, c] : cells) {
      tr.items.push_back(i);
      tr.rewards.push_back(c.first / c.second);
    }
    out.push_back(std::move(tr));
  }
  return out;
}

inline bool in_top_fraction(const std::vector<double>& rewards, std::size_t pick,
                            double fraction) {
  auto sorted = rewards;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const auto k = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(sorted.size()))));
  return rewards[pick] >= sorted[k - 1];
}

}  // namespace detail

/// Plain SGD over task groups. Each step samples n rewarded instructions of
/// one task and descends the listwise loss. After every epoch the scorer is
/// checked on descriptors drawn from each task's dev inputs: quality is the
/// share of tasks whose argmax (over rewarded instructions) lies in the top
/// 20% of measured rewards. The best epoch is returned; ties in quality go
/// to the lower fixed-set training loss.
inline ScorerState train_scorer(const std::vector<RewardRecord>& records,
                                const InstructionPool& pool,
                                const std::vector<TaskDataset>& tasks,
                                const TrainHyper& hyper, std::uint64_t seed,
                                TrainReport* report = nullptr) {
  if (hyper.n < 2) throw Error(ErrorCode::kInvalidArgument, "n must be >= 2");
  if (!(hyper.lr > 0.0)) throw Error(ErrorCode::kInvalidArgument, "lr must be positive");
  const FeatureConfig& fc = hyper.features;
  std::string trained_on;
  const auto groups = detail::group_rewards(records, pool, tasks);
  for (const auto& g : groups) {
    if (!trained_on.empty()) trained_on += ',';
    trained_on += tasks[g.task_index].task_name;
  }
  ScorerState state = ScorerState::zeros(fc, trained_on);
  if (groups.empty()) {
    throw Error(ErrorCode::kInsufficientRewards, "no reward records match the pool");
  }
  for (const auto& g : groups) {
    if (g.items.size() < hyper.n) {
      throw Error(ErrorCode::kInsufficientRewards,
                  tasks[g.task_index].task_name + ": " + std::to_string(g.items.size()) +
                      " rewarded instructions, n = " + std::to_string(hyper.n));
    }
  }

  // Features are fixed per (task, item): compute once.
  struct Prepared {
    std::vector<SparseVector> train_x;
    std::vector<SparseVector> dev_x;
  };
  std::vector<Prepared> prep(groups.size());
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& task = tasks[groups[gi].task_index];
    const auto d_train = make_descriptor(task, hyper.model_name,
                                         std::min(hyper.m, task.train.size()),
                                         derive_seed(seed, 2 * gi));
    const auto d_dev = make_descriptor(
        task, hyper.model_name,
        std::min(hyper.m, task.dev.empty() ? task.train.size() : task.dev.size()),
        derive_seed(seed, 2 * gi + 1), DescriptorSource::kDev);
    for (auto i : groups[gi].items) {
      prep[gi].train_x.push_back(featurize_sparse(d_train, pool.instructions[i], fc));
      prep[gi].dev_x.push_back(featurize_sparse(d_dev, pool.instructions[i], fc));
    }
  }

  auto scores_of = [&](const std::vector<SparseVector>& xs) {
    std::vector<double> q;
    q.reserve(xs.size());
    for (const auto& x : xs) q.push_back(dot(state.weights, x) + state.bias);
    return q;
  };
  // Full-list loss over every non-degenerate task: a fixed objective that
  // does not depend on the sampling schedule.
  auto fixed_loss = [&] {
    double total = 0.0;
    std::size_t cnt = 0;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      try {
        total += listwise_loss(scores_of(prep[gi].train_x), groups[gi].rewards);
        ++cnt;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kDegenerateBatch) throw;
      }
    }
    return cnt ? total / static_cast<double>(cnt) : 0.0;
  };
  auto dev_quality = [&] {
    std::size_t good = 0;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const auto q = scores_of(prep[gi].dev_x);
      const auto pick = static_cast<std::size_t>(
          std::max_element(q.begin(), q.end()) - q.begin());
      good += detail::in_top_fraction(groups[gi].rewards, pick, 0.2) ? 1 : 0;
    }
    return static_cast<double>(good) / static_cast<double>(groups.size());
  };

  TrainReport rep;
  rep.epoch_loss.push_back(fixed_loss());
  if (hyper.epochs == 0) {
    if (report) *report = rep;
    return state;
  }

  RngStream rng(derive_seed(seed, 0x7261696eULL));
  ScorerState best = state;
  double best_quality = -1.0;
  double best_loss = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  const std::size_t batch = std::max<std::size_t>(1, hyper.batch_size);

  for (std::size_t epoch = 1; epoch <= hyper.epochs; ++epoch) {
    std::vector<std::size_t> order(groups.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      ScorerGradient acc{std::vector<double>(state.weights.size(), 0.0), 0.0};
      std::size_t used = 0;
      for (std::size_t b = start; b < std::min(start + batch, order.size()); ++b) {
        const std::size_t gi = order[b];
        const auto pick = rng.sample_indices(groups[gi].items.size(), hyper.n);
        std::vector<double> r;
        std::vector<SparseVector> xs;
        for (auto p : pick) {
          r.push_back(groups[gi].rewards[p]);
          xs.push_back(prep[gi].train_x[p]);
        }
        const auto q = scores_of(xs);
        double loss = 0.0;
        try {
          loss = listwise_loss(q, r);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kDegenerateBatch) throw;
          ++rep.skipped_batches;
          continue;
        }
        if (!std::isfinite(loss)) {
          throw Error(ErrorCode::kNonFiniteLoss,
                      "non-finite loss at epoch " + std::to_string(epoch) + " on task " +
                          tasks[groups[gi].task_index].task_name);
        }
        const auto gq = loss_gradient_q(q, r);
        for (std::size_t j = 0; j < xs.size(); ++j) {
          for (const auto& [i, v] : xs[j].entries) acc.weights[i] += gq[j] * v;
          acc.bias += gq[j];
        }
        ++used;
      }
      if (used == 0) continue;
      const double scale = hyper.lr / static_cast<double>(used);
      for (std::size_t i = 0; i < state.weights.size(); ++i) {
        state.weights[i] -= scale * acc.weights[i];
      }
      state.bias -= scale * acc.bias;
    }
    const double loss = fixed_loss();
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kNonFiniteLoss,
                  "non-finite training loss after epoch " + std::to_string(epoch));
    }
    const double quality = dev_quality();
    rep.epoch_loss.push_back(loss);
    rep.dev_quality.push_back(quality);
    if (quality > best_quality || (quality == best_quality && loss < best_loss)) {
      best = state;
      best_quality = quality;
      best_loss = loss;
      rep.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= hyper.patience) {
      break;
    }
  }
  if (report) *report = rep;
  return best;
}

// ---------------------------------------------------------------------------
// Selection

struct Selection {
  std::size_t index = 0;
  Instruction instruction;
  std::vector<double> scores;
  std::vector<std::string> flags;
};

inline std::size_t argmax_lowest(std::span<const double> q) {
  if (q.empty()) throw Error(ErrorCode::kInvalidArgument, "nothing to select from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < q.size(); ++i) {
    if (q[i] > q[best]) best = i;
  }
  return best;
}

inline Selection select_instruction(const ScorerState& state,
                                    const InstructionPool& pool,
                                    const TaskDescriptor& desc) {
  if (pool.size() == 0) throw Error(ErrorCode::kInvalidArgument, "empty pool");
  Selection s;
  for (const auto& ins : pool.instructions) s.scores.push_back(score(state, desc, ins));
  s.index = argmax_lowest(s.scores);
  s.instruction = pool.instructions[s.index];
  return s;
}

/// Inference-only variant that scores each prompt by the log-probability of
/// a " yes" continuation from the backend.
inline Selection select_instruction_remote(LlmClient& client,
                                           const InstructionPool& pool,
                                           const TaskDescriptor& desc) {
  if (pool.size() == 0) throw Error(ErrorCode::kInvalidArgument, "empty pool");
  static const std::vector<std::string> kYes = {" yes"};
  Selection s;
  for (const auto& ins : pool.instructions) {
    s.scores.push_back(client.candidate_logprobs(build_scoring_prompt(desc, ins), kYes)[0]);
  }
  s.index = argmax_lowest(s.scores);
  s.instruction = pool.instructions[s.index];
  return s;
}

enum class SelectorKind { kTaskInformed, kRandom, kEmpirical, kLlm };

inline std::string_view selector_name(SelectorKind k) {
  switch (k) {
    case SelectorKind::kTaskInformed: return "task_informed";
    case SelectorKind::kRandom: return "random_select";
    case SelectorKind::kEmpirical: return "empirical_select";
    case SelectorKind::kLlm: return "llm_select";
  }
  return "";
}

inline Selection random_select(const InstructionPool& pool, std::uint64_t seed) {
  if (pool.size() == 0) throw Error(ErrorCode::kInvalidArgument, "empty pool");
  RngStream rng(seed);
  Selection s;
  s.index = static_cast<std::size_t>(rng.uniform_int(pool.size()));
  s.instruction = pool.instructions[s.index];
  return s;
}

/// Mean over training tasks of each instruction's per-task mean reward.
/// Instructions without records are not eligible.
inline Selection empirical_select(const InstructionPool& pool,
                                  const std::vector<RewardRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::kNoRecords, "no reward records");
  std::map<std::string, std::map<std::string, std::pair<double, int>>> by_ins;
  for (const auto& r : records) {
    auto& c = by_ins[r.instruction_name][r.task_name];
    c.first += r.reward;
    c.second += 1;
  }
  Selection s;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    auto it = by_ins.find(pool.instructions[i].name);
    if (it == by_ins.end()) {
      s.scores.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    double total = 0.0;
    for (const auto& [task, c] : it->second) total += c.first / c.second;
    const double mean = total / static_cast<double>(it->second.size());
    s.scores.push_back(mean);
    if (!best || mean > s.scores[*best]) best = i;
  }
  if (!best) throw Error(ErrorCode::kNoRecords, "no reward records match the pool");
  s.index = *best;
  s.instruction = pool.instructions[s.index];
  return s;
}

inline std::string llm_select_prompt(const InstructionPool& pool,
                                     const TaskDescriptor& desc) {
  std::string p = "You are choosing a data augmentation instruction for the task " +
                  desc.task_name + " and the model " + desc.target_model_name +
                  ". Example inputs from the task:\n";
  for (const auto& x : desc.rep_examples) p += "- " + x + "\n";
  p += "Candidate instructions:\n";
  for (std::size_t i = 0; i < pool.size(); ++i) {
    p += std::to_string(i) + ". " + render_instruction(pool.instructions[i]) + "\n";
  }
  p += "Reply with the number of the most suitable instruction.";
  return p;
}

inline std::optional<std::size_t> first_integer(std::string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) continue;
    std::size_t v = 0;
    std::size_t j = i;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
      if (v > (std::numeric_limits<std::size_t>::max() - 9) / 10) return std::nullopt;
      v = v * 10 + static_cast<std::size_t>(text[j] - '0');
      ++j;
    }
    return v;
  }
  return std::nullopt;
}

inline Selection llm_select(const InstructionPool& pool, const TaskDescriptor& desc,
                            LlmClient& client, std::uint64_t seed) {
  if (pool.size() == 0) throw Error(ErrorCode::kInvalidArgument, "empty pool");
  const auto reply = client.chat_complete(
      user_request(client.config().model, llm_select_prompt(pool, desc), 0.0));
  const auto n = first_integer(reply);
  if (n && *n < pool.size()) {
    Selection s;
    s.index = *n;
    s.instruction = pool.instructions[*n];
    return s;
  }
  Selection s = random_select(pool, seed);
  s.flags.push_back("llm_select_fallback_random");
  return s;
}

}  // namespace augmenta

#endif  // AUGMENTA_SELECTOR_HPP_
