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

#include <gtest/gtest.h>

#include "augmenta/evalharness.hpp"
#include "test_util.hpp"

namespace augmenta {
namespace {

using testing::TempDir;

/// Returns fixed scores regardless of input.
class RiggedModel : public TargetModel {
 public:
  explicit RiggedModel(std::vector<double> s) : s_(std::move(s)) {}
  void fit(std::span<const TrainingPair>) override {}
  std::vector<double> candidate_scores(std::string_view,
                                       std::span<const std::string>) const override {
    return s_;
  }

 private:
  std::vector<double> s_;
};

TEST(ReferenceModel, FitsSeparablePairs) {
  const auto t = testing::cue_task("cue", 16);
  ReferenceTargetModel m(1);
  train_target(m, t, {}, 1);
  std::size_t right = 0;
  for (const auto& ex : t.train) right += ex.candidates[predict(m, ex.input, ex.candidates)] == ex.output;
  EXPECT_EQ(right, t.train.size());
  std::size_t test_right = 0;
  for (const auto& ex : t.test) test_right += ex.candidates[predict(m, ex.input, ex.candidates)] == ex.output;
  EXPECT_EQ(test_right, t.test.size());
}

TEST(ReferenceModel, FreeFormCandidates) {
  TaskDataset t;
  t.task_name = "opp";
  t.kind = TaskKind::kNonClassification;
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"hot", "cold"}, {"up", "down"}, {"big", "small"}, {"fast", "slow"}};
  for (int rep = 0; rep < 3; ++rep) {
    for (const auto& [a, b] : pairs) {
      t.train.push_back({"opposite of " + a, b, {b, a, "blue"}});
      t.train.push_back({"opposite of " + b, a, {"blue", b, a}});
    }
  }
  ReferenceTargetModel m(3);
  train_target(m, t, {}, 3);
  for (const auto& ex : t.train) {
    EXPECT_EQ(ex.candidates[predict(m, ex.input, ex.candidates)], ex.output) << ex.input;
  }
}

TEST(Predict, ArgmaxLowestIndexTies) {
  const std::vector<std::string> c{"a", "b", "c"};
  EXPECT_EQ(predict(RiggedModel({0.1, 0.9, 0.9}), "x", c), 1u);
  EXPECT_EQ(predict(RiggedModel({2, 2, 2}), "x", c), 0u);
  EXPECT_THROW(predict(RiggedModel({1}), "x", c), Error);
  EXPECT_THROW(predict(RiggedModel({}), "x", {}), Error);
}

TEST(TrainingSet, OriginalPlusAugmentedShuffled) {
  const auto t = testing::cue_task("cue", 4);
  AugmentationRecord r;
  r.original = t.train[0];
  r.augmented_input = "new text";
  const auto pairs = training_set(t, {r}, 7);
  ASSERT_EQ(pairs.size(), 5u);
  EXPECT_EQ(training_set(t, {r}, 7).size(), 5u);
  std::size_t aug = 0;
  for (const auto& p : pairs) {
    if (p.input == "new text") {
      ++aug;
      EXPECT_EQ(p.output, t.train[0].output);
    }
  }
  EXPECT_EQ(aug, 1u);
}

TEST(Metrics, MacroF1HandValues) {
  const std::vector<std::string> g{"A", "A", "B"}, p{"A", "B", "B"};
  EXPECT_NEAR(macro_f1(g, p), 2.0 / 3.0, 1e-15);
  // class C only predicted: F1 0 for C.
  const std::vector<std::string> g2{"A", "B"}, p2{"A", "C"};
  EXPECT_NEAR(macro_f1(g2, p2), (1.0 + 0.0 + 0.0) / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(macro_f1(g, g), 1.0);
  EXPECT_THROW(macro_f1(g, p2), Error);
  EXPECT_THROW(macro_f1(std::vector<std::string>{}, std::vector<std::string>{}), Error);
}

TEST(Metrics, AccuracyTrims) {
  const std::vector<std::string> g{"cold ", "x", "y"}, p{" cold", "x", "z"};
  EXPECT_NEAR(accuracy(g, p), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(metric_for(TaskKind::kClassification), "macro_f1");
  EXPECT_EQ(metric_for(TaskKind::kNonClassification), "accuracy");
}

TEST(Evaluate, OneResultPerSeedAndDeterministic) {
  const auto t = testing::cue_task("cue", 24);
  EvalOptions o;
  o.k = 8;
  AugmenterSpec spec;
  spec.method = NonLlmMethod::kWordSwap;
  spec.seed = 3;
  const auto a = evaluate_task(t, spec, reference_factory(), o);
  ASSERT_EQ(a.results.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(a.results[i].seed, default_seeds()[i]);
    EXPECT_EQ(a.results[i].method_id, "word_swap");
    EXPECT_EQ(a.results[i].metric, "macro_f1");
    EXPECT_EQ(a.results[i].n_test, t.test.size());
  }
  const auto b = evaluate_task(t, spec, reference_factory(), o);
  EXPECT_EQ(a.results, b.results);
  const auto orig = evaluate_task(t, std::nullopt, reference_factory(), o, nullptr, "Original");
  EXPECT_EQ(orig.results[0].method_id, "Original");
}

TEST(Evaluate, KeepsRecordsWithLabel) {
  const auto t = testing::cue_task("cue", 24);
  EvalOptions o;
  o.k = 8;
  o.seeds = {1, 2};
  o.keep_records = true;
  AugmenterSpec spec;
  spec.method = NonLlmMethod::kCharSwap;
  const auto s = evaluate_task(t, spec, reference_factory(), o, nullptr, "Non-LLMDA:char_swap");
  EXPECT_EQ(s.records.size(), 16u);
  for (const auto& r : s.records) EXPECT_EQ(r.method_id, "Non-LLMDA:char_swap");
}

TEST(Evaluate, AllSeedsFailed) {
  const auto t = testing::cue_task("cue", 4);
  EvalOptions o;
  o.k = 16;
  try {
    evaluate_task(t, std::nullopt, reference_factory(), o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAllSeedsFailed);
  }
}

TEST(Evaluate, DevSplitForRewards) {
  const auto t = testing::cue_task("cue", 24);
  BackendConfig cfg;
  cfg.kind = "mock";
  auto client = make_client(cfg);
  const auto pool = InstructionPool::from(
      {{"Shuffle", "shuffle words", InstructionOrigin::kSeedManual},
       {"Echo", "repeat it", InstructionOrigin::kSeedManual}});
  RewardOptions ro;
  ro.eval.k = 8;
  ro.eval.seeds = {1, 2};
  ro.seed = 4;
  const auto rs = generate_rewards({t}, pool, reference_factory(), *client, ro);
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_EQ(rs[0].instruction_name, "Shuffle");
  AugmenterSpec spec;
  spec.method = pool.instructions[0];
  spec.rate = ro.rate;
  spec.seed = derive_seed(4, 0x10000);
  EvalOptions dev = ro.eval;
  dev.split = EvalSplit::kDev;
  EXPECT_DOUBLE_EQ(rs[0].reward,
                   evaluate_task(t, spec, reference_factory(), dev, client.get()).mean);
  ro.per_task = 1;
  EXPECT_EQ(generate_rewards({t}, pool, reference_factory(), *client, ro).size(), 1u);
}

TEST(Results, MacroAverageAndJsonl) {
  std::vector<EvalResult> rs{{"b", "m", 2, "accuracy", 0.5, 10},
                             {"a", "m", 1, "macro_f1", 0.2, 10},
                             {"a", "m", 2, "macro_f1", 0.4, 10}};
  EXPECT_NEAR(macro_average(rs), (0.3 + 0.5) / 2.0, 1e-15);
  EXPECT_THROW(macro_average({}), Error);
  sort_results(rs);
  EXPECT_EQ(rs[0].task_name, "a");
  EXPECT_EQ(rs[2].task_name, "b");
  TempDir dir;
  detail::write_file_atomic(dir / "r.jsonl", results_to_jsonl(rs));
  EXPECT_EQ(load_results(dir / "r.jsonl"), rs);
}

}  // namespace
}  // namespace augmenta
