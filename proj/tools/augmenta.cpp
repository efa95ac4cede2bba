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

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "augmenta/augmenta.hpp"

namespace {

using namespace augmenta;

struct BackendFlags {
  bool mock = false;
  std::string mock_script;
  std::string model;
  std::string base_url;
  std::string cache_dir;
  int max_parallel = 0;
  std::uint64_t budget_tokens = 0;

  void attach(CLI::App* app) {
    app->add_flag("--mock", mock, "Use the offline mock backend");
    app->add_option("--mock-script", mock_script, "Scripted mock responses (JSON)");
    app->add_option("--model", model, "Generation model name");
    app->add_option("--base-url", base_url, "OpenAI-compatible endpoint");
    app->add_option("--cache-dir", cache_dir, "Response cache directory");
    app->add_option("--max-parallel", max_parallel, "Concurrent backend requests");
    app->add_option("--budget-tokens", budget_tokens, "Hard cap on tokens spent");
  }

  void apply(BackendConfig& cfg) const {
    if (mock) cfg.kind = "mock";
    if (!mock_script.empty()) cfg.mock_script = mock_script;
    if (!model.empty()) cfg.model = model;
    if (!base_url.empty()) cfg.base_url = base_url;
    if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
    if (max_parallel > 0) cfg.max_parallel = max_parallel;
    if (budget_tokens > 0) cfg.budget_tokens = budget_tokens;
  }

  std::unique_ptr<LlmClient> client() const {
    BackendConfig cfg;
    cfg.apply_env();
    apply(cfg);
    return make_client(cfg);
  }
};

struct MethodFlags {
  std::string method;
  std::string instruction_file;
  std::string instruction;
  double rate = 0.1;
  std::uint64_t seed = 0;
  int reps = 1;

  void attach(CLI::App* app) {
    app->add_option("--method", method, "Algorithmic method, e.g. char_swap");
    app->add_option("--instructions", instruction_file, "Instruction file for --instruction");
    app->add_option("--instruction", instruction, "Instruction name to apply via the LLM");
    app->add_option("--rate", rate, "Edit rate in (0, 1]");
    app->add_option("--seed", seed, "Augmentation seed");
    app->add_option("--reps", reps, "Augmented copies per example");
  }

  std::optional<AugmenterSpec> spec() const {
    if (method.empty() && instruction.empty()) return std::nullopt;
    AugmenterSpec s;
    s.rate = rate;
    s.seed = seed;
    s.repetitions = reps;
    if (!method.empty()) {
      s.method = parse_method(method);
    } else {
      const fs::path file = instruction_file.empty()
                                ? data_dir() / "instructions" / "paper_generated.json"
                                : fs::path(instruction_file);
      const auto pool = InstructionPool::from(load_instructions(file));
      auto it = std::find_if(pool.instructions.begin(), pool.instructions.end(),
                             [&](const Instruction& i) { return i.name == instruction; });
      if (it == pool.instructions.end()) {
        throw Error(ErrorCode::kConfig, "instruction '" + instruction + "' not in " + file.string());
      }
      s.method = *it;
    }
    return s;
  }
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto c = s.find(',', start);
    auto item = trim(std::string_view(s).substr(start, c - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (c == std::string::npos) break;
    start = c + 1;
  }
  return out;
}

void print_usage(const LlmClient& client) {
  const auto u = client.ledger().snapshot();
  std::cerr << "usage: requests=" << u.request_count << " cache_hits=" << u.cache_hits
            << " mock_responses=" << u.mock_responses << " tokens=" << u.total_tokens() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"augmenta: instruction-driven text data augmentation"};
  app.require_subcommand(1);

  // gen-instructions
  auto* gen = app.add_subcommand("gen-instructions", "Grow an instruction pool from seeds");
  BackendFlags gen_b;
  gen_b.attach(gen);
  std::string gen_seeds = (data_dir() / "instructions" / "manual_seeds.json").string();
  std::string gen_out = "pool.json";
  GenerationConfig gen_cfg;
  gen->add_option("--seeds", gen_seeds, "Seed instruction file");
  gen->add_option("--out", gen_out, "Output pool file");
  gen->add_option("--target", gen_cfg.target_pool_size, "Target pool size");
  gen->add_option("--threshold", gen_cfg.similarity_threshold, "ROUGE-L rejection threshold");
  gen->add_option("--max-iter", gen_cfg.max_iterations, "Maximum generation calls");
  gen->add_option("--seeds-per-prompt", gen_cfg.seeds_per_prompt, "Exemplars per prompt");
  gen->add_option("--seed", gen_cfg.seed, "Sampling seed");

  // augment
  auto* aug = app.add_subcommand("augment", "Augment the few-shot train split of one task");
  BackendFlags aug_b;
  aug_b.attach(aug);
  MethodFlags aug_m;
  aug_m.attach(aug);
  std::string aug_tasks = (data_dir() / "tasks" / "toy").string();
  std::string aug_task;
  std::string aug_out = "augmented.jsonl";
  std::size_t aug_k = 16;
  std::uint64_t aug_sample_seed = 13;
  aug->add_option("--tasks", aug_tasks, "Task directory or file");
  aug->add_option("--task", aug_task, "Task name")->required();
  aug->add_option("--out", aug_out, "Output records (JSONL)");
  aug->add_option("--k", aug_k, "Few-shot training examples (0 = whole split)");
  aug->add_option("--sample-seed", aug_sample_seed, "Few-shot sampling seed");

  // gen-rewards
  auto* rew = app.add_subcommand("gen-rewards", "Measure per-instruction rewards on training tasks");
  BackendFlags rew_b;
  rew_b.attach(rew);
  std::string rew_pool, rew_tasks = (data_dir() / "tasks" / "toy").string(), rew_train, rew_out = "rewards.jsonl";
  RewardOptions rew_opts;
  rew->add_option("--pool", rew_pool, "Instruction pool")->required();
  rew->add_option("--tasks", rew_tasks, "Task directory");
  rew->add_option("--train-tasks", rew_train, "Comma-separated training task names")->required();
  rew->add_option("--out", rew_out, "Output rewards (JSONL)");
  rew->add_option("--k", rew_opts.eval.k, "Few-shot training examples");
  rew->add_option("--seeds", rew_opts.eval.seeds, "Evaluation seeds");
  rew->add_option("--per-task", rew_opts.per_task, "Instructions rewarded per task (0 = all)");
  rew->add_option("--seed", rew_opts.seed, "Subsampling seed");

  // train-scorer
  auto* trn = app.add_subcommand("train-scorer", "Train the instruction scorer");
  std::string trn_pool, trn_rewards, trn_tasks = (data_dir() / "tasks" / "toy").string(), trn_out = "scorer.json";
  TrainHyper hyper;
  std::uint64_t trn_seed = 7;
  trn->add_option("--pool", trn_pool, "Instruction pool")->required();
  trn->add_option("--rewards", trn_rewards, "Reward records (JSONL)")->required();
  trn->add_option("--tasks", trn_tasks, "Task directory");
  trn->add_option("--out", trn_out, "Output scorer state");
  trn->add_option("--n", hyper.n, "Instructions per listwise group");
  trn->add_option("--m", hyper.m, "Examples per task descriptor");
  trn->add_option("--lr", hyper.lr, "Learning rate");
  trn->add_option("--epochs", hyper.epochs, "Maximum epochs");
  trn->add_option("--patience", hyper.patience, "Early-stopping patience");
  trn->add_option("--model-name", hyper.model_name, "Target model name in descriptors");
  trn->add_option("--seed", trn_seed, "Training seed");

  // select
  auto* sel = app.add_subcommand("select", "Pick an instruction for a task");
  BackendFlags sel_b;
  sel_b.attach(sel);
  std::string sel_scorer, sel_pool, sel_task, sel_tasks = (data_dir() / "tasks" / "toy").string();
  std::string sel_model = "target-125m", sel_kind = "task_informed", sel_rewards;
  std::size_t sel_m = 2;
  std::uint64_t sel_seed = 7;
  sel->add_option("--scorer", sel_scorer, "Scorer state (task_informed)");
  sel->add_option("--pool", sel_pool, "Instruction pool")->required();
  sel->add_option("--task", sel_task, "Task name")->required();
  sel->add_option("--tasks", sel_tasks, "Task directory");
  sel->add_option("--model-name", sel_model, "Target model name");
  sel->add_option("--m", sel_m, "Examples in the descriptor");
  sel->add_option("--seed", sel_seed, "Descriptor and random-selection seed");
  sel->add_option("--selector", sel_kind,
                  "task_informed | random_select | empirical_select | llm_select");
  sel->add_option("--rewards", sel_rewards, "Reward records (empirical_select)");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Evaluate a method on one task over several seeds");
  BackendFlags ev_b;
  ev_b.attach(ev);
  MethodFlags ev_m;
  ev_m.attach(ev);
  std::string ev_tasks = (data_dir() / "tasks" / "toy").string(), ev_task, ev_out;
  EvalOptions ev_opts;
  ev->add_option("--tasks", ev_tasks, "Task directory");
  ev->add_option("--task", ev_task, "Task name")->required();
  ev->add_option("--k", ev_opts.k, "Few-shot training examples");
  ev->add_option("--seeds", ev_opts.seeds, "Evaluation seeds");
  ev->add_option("--out", ev_out, "Append results to this JSONL file");

  // run-experiment
  auto* run = app.add_subcommand("run-experiment", "Run the full pipeline from a config file");
  std::string run_config;
  bool run_mock = false, run_resume = false;
  std::uint64_t run_budget = 0;
  std::string run_results;
  run->add_option("--config", run_config, "Experiment config (TOML subset)")->required();
  run->add_flag("--mock", run_mock, "Force the offline mock backend");
  run->add_flag("--resume", run_resume, "Skip stages whose checkpoints exist");
  run->add_option("--budget-tokens", run_budget, "Hard cap on tokens spent");
  run->add_option("--results-dir", run_results, "Override [paths].results_dir");

  // report
  auto* rep = app.add_subcommand("report", "Render report files from a results directory");
  std::string rep_dir;
  rep->add_option("--results-dir", rep_dir, "Directory holding results.jsonl")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      auto client = gen_b.client();
      const auto pool = run_generation_loop(load_instructions(gen_seeds), gen_cfg, *client);
      detail::write_file_atomic(gen_out, pool_to_json(pool));
      std::cout << "pool: " << pool.size() << " instructions after " << pool.backend_calls
                << " calls" << (pool.target_reached ? "" : " (target not reached)") << "\n";
      print_usage(*client);
    } else if (aug->parsed()) {
      const auto spec = aug_m.spec();
      if (!spec) throw Error(ErrorCode::kInvalidArgument, "pass --method or --instruction");
      auto task = find_task(load_tasks(aug_tasks), aug_task);
      if (aug_k > 0) task = sample_few_shot(task, aug_k, aug_sample_seed);
      std::unique_ptr<LlmClient> client;
      if (spec->uses_backend()) client = aug_b.client();
      const auto recs = apply_to_dataset(*spec, task, client.get());
      detail::write_file_atomic(aug_out, records_to_jsonl(recs));
      std::cout << "wrote " << recs.size() << " records to " << aug_out << "\n";
      if (client) print_usage(*client);
    } else if (rew->parsed()) {
      auto client = rew_b.client();
      const auto tasks = load_tasks(rew_tasks);
      std::vector<TaskDataset> train;
      for (const auto& n : split_csv(rew_train)) train.push_back(find_task(tasks, n));
      std::vector<std::string> skipped;
      const auto rewards = generate_rewards(train, load_pool(rew_pool), reference_factory(),
                                            *client, rew_opts, &skipped);
      for (const auto& s : skipped) std::cerr << "skipped " << s << "\n";
      detail::write_file_atomic(rew_out, rewards_to_jsonl(rewards));
      std::cout << "wrote " << rewards.size() << " rewards to " << rew_out << "\n";
      print_usage(*client);
    } else if (trn->parsed()) {
      const auto tasks = load_tasks(trn_tasks);
      TrainReport tr;
      const auto state = train_scorer(load_rewards(trn_rewards), load_pool(trn_pool), tasks,
                                      hyper, trn_seed, &tr);
      detail::write_file_atomic(trn_out, scorer_to_json(state));
      std::cout << "best epoch " << tr.best_epoch << ", dev quality "
                << (tr.dev_quality.empty() ? 0.0 : tr.dev_quality[tr.best_epoch ? tr.best_epoch - 1 : 0])
                << ", wrote " << trn_out << "\n";
    } else if (sel->parsed()) {
      const auto pool = load_pool(sel_pool);
      const auto task = find_task(load_tasks(sel_tasks), sel_task);
      const auto desc = make_descriptor(task, sel_model, sel_m, sel_seed);
      Selection s;
      if (sel_kind == "task_informed") {
        if (sel_scorer.empty()) throw Error(ErrorCode::kInvalidArgument, "--scorer is required");
        s = select_instruction(load_scorer(sel_scorer), pool, desc);
      } else if (sel_kind == "random_select") {
        s = random_select(pool, sel_seed);
      } else if (sel_kind == "empirical_select") {
        if (sel_rewards.empty()) throw Error(ErrorCode::kInvalidArgument, "--rewards is required");
        s = empirical_select(pool, load_rewards(sel_rewards));
      } else if (sel_kind == "llm_select") {
        auto client = sel_b.client();
        s = llm_select(pool, desc, *client, sel_seed);
      } else {
        throw Error(ErrorCode::kInvalidArgument, "unknown selector '" + sel_kind + "'");
      }
      ordered_json out;
      out["task"] = task.task_name;
      out["index"] = s.index;
      out["instruction"] = instruction_to_json(s.instruction);
      out["scores"] = s.scores;
      out["flags"] = s.flags;
      std::cout << out.dump(2) << "\n";
    } else if (ev->parsed()) {
      const auto spec = ev_m.spec();
      const auto task = find_task(load_tasks(ev_tasks), ev_task);
      std::unique_ptr<LlmClient> client;
      if (spec && spec->uses_backend()) client = ev_b.client();
      const auto s = evaluate_task(task, spec, reference_factory(), ev_opts, client.get());
      for (const auto& e : s.errors) std::cerr << "failed " << e << "\n";
      const auto lines = results_to_jsonl(s.results);
      if (!ev_out.empty()) {
        std::string prev = fs::exists(ev_out) ? detail::read_file(ev_out) : std::string();
        detail::write_file_atomic(ev_out, prev + lines);
      }
      std::cout << lines << "mean " << s.mean << "\n";
    } else if (run->parsed()) {
      auto cfg = load_pipeline_config(run_config);
      cfg.backend.apply_env();
      if (run_mock) cfg.backend.kind = "mock";
      if (run_budget > 0) cfg.backend.budget_tokens = run_budget;
      if (!run_results.empty()) cfg.results_dir = run_results;
      RunOptions ro;
      ro.resume = run_resume;
      ro.log = &std::cerr;
      const auto r = run_pipeline(cfg, ro);
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << r.files.report_txt;
      std::cerr << "usage: requests=" << r.usage.request_count << " cache_hits="
                << r.usage.cache_hits << " mock_responses=" << r.usage.mock_responses
                << " tokens=" << r.usage.total_tokens() << "\n";
    } else if (rep->parsed()) {
      std::cout << emit_report(rep_dir).report_txt;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
