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

// End-to-end experiment: pool -> rewards + scorer -> selection and
// evaluation on test tasks -> baselines -> report. Each stage leaves a
// marker in results_dir/stages once its outputs are on disk.

#ifndef AUGMENTA_PIPELINE_HPP_
#define AUGMENTA_PIPELINE_HPP_

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "augmenta/augmenters.hpp"
#include "augmenta/backends.hpp"
#include "augmenta/config.hpp"
#include "augmenta/datamodel.hpp"
#include "augmenta/evalharness.hpp"
#include "augmenta/instructgen.hpp"
#include "augmenta/parallel.hpp"
#include "augmenta/report.hpp"
#include "augmenta/selector.hpp"

namespace augmenta {

struct ExperimentReport {
  ReportFiles files;
  UsageSnapshot usage;
  std::vector<std::string> stages_run;
  std::vector<std::string> stages_skipped;
  std::vector<std::string> warnings;
};

struct RunOptions {
  bool resume = false;
  std::ostream* log = nullptr;
  ModelFactory factory;  // reference model when empty
};

namespace detail {

struct EvalItem {
  const TaskDataset* task;
  std::optional<AugmenterSpec> spec;
  std::string label;
};

inline std::vector<EvalSummary> run_items(const std::vector<EvalItem>& items,
                                          const ModelFactory& factory,
                                          const EvalOptions& opts, LlmClient* client) {
  std::vector<EvalSummary> out(items.size());
  parallel_for(items.size(), hardware_workers(), [&](std::size_t i) {
    out[i] = evaluate_task(*items[i].task, items[i].spec, factory, opts, client, items[i].label);
  });
  return out;
}

inline void append_summaries(const std::vector<EvalSummary>& sums,
                             std::vector<EvalResult>& results,
                             std::vector<AugmentationRecord>& records,
                             std::vector<std::string>& warnings) {
  for (const auto& s : sums) {
    results.insert(results.end(), s.results.begin(), s.results.end());
    records.insert(records.end(), s.records.begin(), s.records.end());
    for (const auto& e : s.errors) warnings.push_back(e);
  }
}

}  // namespace detail

inline ExperimentReport run_pipeline(const PipelineConfig& cfg, const RunOptions& run = {}) {
  cfg.validate();
  if (cfg.evaluation.split.train_tasks.empty()) {
    throw Error(ErrorCode::kConfig, "split has no training tasks for the selector");
  }
  const auto tasks = load_tasks(cfg.tasks_dir);
  std::vector<TaskDataset> train_tasks;
  std::vector<TaskDataset> test_tasks;
  for (const auto& n : cfg.evaluation.split.train_tasks) train_tasks.push_back(find_task(tasks, n));
  for (const auto& n : cfg.evaluation.split.test_tasks) test_tasks.push_back(find_task(tasks, n));
  std::vector<Instruction> manual;
  if (!cfg.baselines.manual_file.empty()) manual = load_instructions(cfg.baselines.manual_file);

  auto client = make_client(cfg.backend);
  const ModelFactory factory = run.factory ? run.factory : reference_factory();
  const fs::path dir = cfg.results_dir;
  const fs::path stages = dir / "stages";
  if (!run.resume && fs::exists(stages)) fs::remove_all(stages);
  fs::create_directories(stages);
  fs::create_directories(dir / "augmented");

  ExperimentReport rep;
  bool invalidated = false;
  auto say = [&](const std::string& msg) {
    if (run.log) *run.log << msg << std::endl;
  };
  // A stage is skipped when resuming, its marker and outputs exist, and no
  // earlier stage reran.
  auto stage = [&](const std::string& name, const std::vector<fs::path>& outputs,
                   const std::function<void()>& body) {
    bool done = run.resume && !invalidated && fs::exists(stages / (name + ".done"));
    for (const auto& o : outputs) done = done && fs::exists(o);
    if (done) {
      rep.stages_skipped.push_back(name);
      say("[skip] " + name);
      return;
    }
    say("[run]  " + name);
    try {
      body();
    } catch (const Error& e) {
      throw Error(e.code(), "stage " + name + ": " + e.what());
    }
    detail::write_file_atomic(stages / (name + ".done"), name + "\n");
    rep.stages_run.push_back(name);
    invalidated = true;
  };

  EvalOptions eval;
  eval.k = cfg.evaluation.k;
  eval.seeds = cfg.evaluation.seeds;
  eval.keep_records = true;

  // 1. instruction pool
  const fs::path pool_path = dir / "pool.json";
  stage("pool", {pool_path}, [&] {
    InstructionPool pool;
    if (!cfg.pool_file.empty()) {
      pool = load_pool(cfg.pool_file);
    } else {
      pool = run_generation_loop(load_instructions(cfg.seeds_file), cfg.generation, *client);
      if (!pool.target_reached) rep.warnings.push_back("pool: target size not reached");
    }
    detail::write_file_atomic(pool_path, pool_to_json(pool));
  });
  const InstructionPool pool = load_pool(pool_path);

  // 2. rewards on training tasks, then the scorer
  const fs::path rewards_path = dir / "rewards.jsonl";
  const fs::path scorer_path = dir / "scorer.json";
  stage("selector", {rewards_path, scorer_path}, [&] {
    RewardOptions ro;
    ro.eval = eval;
    ro.eval.keep_records = false;
    ro.per_task = cfg.rewards_per_task;
    ro.seed = cfg.selector_seed;
    ro.rate = cfg.evaluation.rate;
    std::vector<std::string> skipped;
    const auto rewards = generate_rewards(train_tasks, pool, factory, *client, ro, &skipped);
    for (const auto& s : skipped) rep.warnings.push_back("rewards: skipped " + s);
    detail::write_file_atomic(rewards_path, rewards_to_jsonl(rewards));
    TrainReport tr;
    const auto state = train_scorer(rewards, pool, train_tasks, cfg.selector, cfg.selector_seed, &tr);
    detail::write_file_atomic(scorer_path, scorer_to_json(state));
  });
  const auto rewards = load_rewards(rewards_path);
  const ScorerState scorer = load_scorer(scorer_path);

  std::vector<TaskDescriptor> descs;
  for (std::size_t t = 0; t < test_tasks.size(); ++t) {
    descs.push_back(make_descriptor(test_tasks[t], cfg.selector.model_name,
                                    std::min(cfg.selector.m, test_tasks[t].train.size()),
                                    derive_seed(cfg.selector_seed, 0x5e1ec7 + t)));
  }
  auto spec_for = [&](const Instruction& ins, std::size_t t) {
    AugmenterSpec s;
    s.method = ins;
    s.rate = cfg.evaluation.rate;
    s.seed = derive_seed(cfg.selector_seed, 0xa000 + t);
    return s;
  };

  // 3. task-informed selection on test tasks
  const fs::path self_path = dir / "eval_self.jsonl";
  const fs::path self_aug = dir / "augmented" / "self.jsonl";
  const fs::path selections_path = dir / "selections.json";
  stage("self", {self_path, self_aug, selections_path}, [&] {
    std::vector<detail::EvalItem> items;
    ordered_json sel = ordered_json::array();
    for (std::size_t t = 0; t < test_tasks.size(); ++t) {
      const auto s = select_instruction(scorer, pool, descs[t]);
      ordered_json o;
      o["task"] = test_tasks[t].task_name;
      o["instruction"] = s.instruction.name;
      o["index"] = s.index;
      o["scores"] = s.scores;
      sel.push_back(std::move(o));
      items.push_back({&test_tasks[t], spec_for(s.instruction, t), "Self-LLMDA"});
    }
    std::vector<EvalResult> results;
    std::vector<AugmentationRecord> records;
    detail::append_summaries(detail::run_items(items, factory, eval, client.get()), results,
                             records, rep.warnings);
    detail::write_file_atomic(selections_path, sel.dump(2) + "\n");
    detail::write_file_atomic(self_aug, records_to_jsonl(records));
    detail::write_file_atomic(self_path, results_to_jsonl(results));
  });

  // 4. baselines
  const fs::path base_path = dir / "eval_baselines.jsonl";
  const fs::path base_aug = dir / "augmented" / "baselines.jsonl";
  stage("baselines", {base_path, base_aug}, [&] {
    std::vector<detail::EvalItem> items;
    for (std::size_t t = 0; t < test_tasks.size(); ++t) {
      const TaskDataset* task = &test_tasks[t];
      if (cfg.baselines.original) items.push_back({task, std::nullopt, "Original"});
      for (auto m : cfg.baselines.non_llm) {
        AugmenterSpec s;
        s.method = m;
        s.rate = cfg.evaluation.rate;
        s.seed = derive_seed(cfg.selector_seed, 0xb000 + t);
        items.push_back({task, s, "Non-LLMDA:" + std::string(method_name(m))});
      }
      for (const auto& ins : manual) {
        items.push_back({task, spec_for(ins, t), "Manual-LLMDA:" + ins.name});
      }
      for (auto k : cfg.baselines.selectors) {
        std::optional<Selection> s;
        const std::uint64_t sseed = derive_seed(cfg.selector_seed, 0xc000 + t);
        switch (k) {
          case SelectorKind::kRandom: s = random_select(pool, sseed); break;
          case SelectorKind::kEmpirical: s = empirical_select(pool, rewards); break;
          case SelectorKind::kLlm: s = llm_select(pool, descs[t], *client, sseed); break;
          case SelectorKind::kTaskInformed: break;
        }
        if (!s) continue;
        for (const auto& f : s->flags) rep.warnings.push_back(task->task_name + ": " + f);
        items.push_back({task, spec_for(s->instruction, t),
                         "Selector:" + std::string(selector_name(k))});
      }
    }
    std::vector<EvalResult> results;
    std::vector<AugmentationRecord> records;
    detail::append_summaries(detail::run_items(items, factory, eval, client.get()), results,
                             records, rep.warnings);
    detail::write_file_atomic(base_aug, records_to_jsonl(records));
    detail::write_file_atomic(base_path, results_to_jsonl(results));
  });

  // 5. report
  stage("report", {dir / "results.jsonl", dir / "report.txt"}, [&] {
    auto results = load_results(self_path);
    const auto more = load_results(base_path);
    results.insert(results.end(), more.begin(), more.end());
    sort_results(results);
    detail::write_file_atomic(dir / "results.jsonl", results_to_jsonl(results));
    emit_report(dir);
  });

  rep.files = {detail::read_file(dir / "summary.csv"), detail::read_file(dir / "per_task.csv"),
               detail::read_file(dir / "augment_stats.csv"),
               detail::read_file(dir / "report.txt")};
  rep.usage = client->ledger().snapshot();
  return rep;
}

}  // namespace augmenta

#endif  // AUGMENTA_PIPELINE_HPP_
