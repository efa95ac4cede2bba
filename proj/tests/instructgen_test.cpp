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

#include "augmenta/instructgen.hpp"
#include "test_util.hpp"

namespace augmenta {
namespace {

using testing::TempDir;

Instruction ins(const std::string& name, const std::string& body) {
  return {name, body, InstructionOrigin::kSeedManual};
}

std::vector<Instruction> seeds() {
  return {ins("Alpha", "alpha one two three"), ins("Beta", "beta four five six"),
          ins("Gamma", "gamma seven eight nine")};
}

/// Each reply holds `per_call` instructions built from a fresh word range.
std::string fresh_batch(int call, int per_call) {
  std::string out;
  for (int i = 0; i < per_call; ++i) {
    const int id = call * per_call + i;
    out += std::to_string(i + 1) + ". Gen" + std::to_string(id) + ": ";
    for (int w = 0; w < 6; ++w) out += "t" + std::to_string(id) + "x" + std::to_string(w) + " ";
    out += "\n";
  }
  return out;
}

struct ScriptedGen : LanguageModel {
  int per_call = 5;
  int calls = 0;
  std::function<void(int)> hook;
  std::string complete(const ChatRequest&, UsageLedger&) override {
    const int c = calls++;
    if (hook) hook(c);
    return fresh_batch(c, per_call);
  }
  double candidate_logprob(const std::string&, std::string_view, std::string_view,
                           UsageLedger&) override {
    return 0.0;
  }
  bool is_network() const override { return false; }
};

TEST(Prompt, NumbersRenderedSeeds) {
  const auto s = seeds();
  const auto req = build_generation_prompt(std::span(s).first(2), "m", 0.5);
  const auto& p = req.messages.at(0).content;
  EXPECT_EQ(p.rfind(std::string(kGenerationPrompt), 0), 0u);
  EXPECT_NE(p.find("\n1. Alpha: alpha one two three\n2. Beta: beta four five six"),
            std::string::npos);
  EXPECT_EQ(req.temperature, 0.5);
  EXPECT_THROW(build_generation_prompt({}, "m"), Error);
}

TEST(Parse, ListMarkersAndBold) {
  const auto xs = parse_instructions(
      "Here you go:\n1. **Tense Shift**: change the tense.\n2) Voice: go passive\n"
      "- Echo: repeat\n\n3. no colon here\n4. : empty name\n");
  ASSERT_EQ(xs.size(), 3u);
  EXPECT_EQ(xs[0].name, "Tense Shift");
  EXPECT_EQ(xs[0].body, "change the tense.");
  EXPECT_EQ(xs[1].name, "Voice");
  EXPECT_EQ(xs[2].name, "Echo");
  for (const auto& x : xs) EXPECT_EQ(x.origin, InstructionOrigin::kLlmGenerated);
}

TEST(Filter, OrderDependentAgainstPoolAndAccepted) {
  const auto pool = InstructionPool::from({ins("P", "a b c d e f g h i j")});
  const std::vector<Instruction> cands = {
      ins("Near", "a b c d e f g h i x"),  // 0.9 vs pool
      ins("New", "k l m n o p"),
      ins("NearNew", "k l m n o q"),       // 5/6 vs New
      ins("Other", "u v w")};
  std::vector<double> scores;
  const auto kept = filter_similar(cands, pool, 0.7, &scores);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].name, "New");
  EXPECT_EQ(kept[1].name, "Other");
  ASSERT_EQ(scores.size(), 4u);
  EXPECT_NEAR(scores[0], 0.9, 1e-12);
  EXPECT_NEAR(scores[2], 5.0 / 6.0, 1e-12);
  EXPECT_THROW(filter_similar(cands, pool, 1.0), Error);
}

TEST(Dedup, NormalizedNamesFirstWins) {
  auto pool = InstructionPool::from({ins("Back Translation", "x"), ins("back  translation", "y"),
                                     ins("BACK TRANSLATION ", "z"), ins("Other", "w")});
  const auto d = dedup_by_name(pool);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.instructions[0].body, "x");
}

TEST(Loop, StopsAtTargetAndTruncates) {
  auto model = std::make_unique<ScriptedGen>();
  auto* raw = model.get();
  LlmClient client(BackendConfig{}, std::move(model));
  GenerationConfig cfg;
  cfg.target_pool_size = 14;
  cfg.seeds_per_prompt = 2;
  const auto pool = run_generation_loop(seeds(), cfg, client);
  // 3 seeds + 5 per call: 8, 13, 18 -> three calls, truncated to 14.
  EXPECT_EQ(raw->calls, 3);
  EXPECT_EQ(pool.backend_calls, 3u);
  EXPECT_EQ(pool.size(), 14u);
  EXPECT_TRUE(pool.target_reached);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(pool.instructions[i], seeds()[i]);
    EXPECT_EQ(pool.iteration[i], 0u);
  }
  EXPECT_EQ(pool.iteration.back(), 3u);
  EXPECT_EQ(pool.log.size(), 15u);
}

TEST(Loop, MaxIterationsLeavesTargetUnreached) {
  LlmClient client(BackendConfig{}, std::make_unique<ScriptedGen>());
  GenerationConfig cfg;
  cfg.target_pool_size = 100;
  cfg.max_iterations = 2;
  const auto pool = run_generation_loop(seeds(), cfg, client);
  EXPECT_EQ(pool.size(), 13u);
  EXPECT_FALSE(pool.target_reached);
}

TEST(Loop, FailedCallsCountAndExhaust) {
  auto flaky = std::make_unique<ScriptedGen>();
  flaky->hook = [](int call) {
    if (call == 0) throw Error(ErrorCode::kTransport, "blip");
  };
  LlmClient client(BackendConfig{}, std::move(flaky));
  GenerationConfig cfg;
  cfg.target_pool_size = 8;
  const auto pool = run_generation_loop(seeds(), cfg, client);
  EXPECT_EQ(pool.failed_calls, 1u);
  EXPECT_EQ(pool.backend_calls, 2u);
  EXPECT_EQ(pool.size(), 8u);

  auto dead = std::make_unique<ScriptedGen>();
  dead->hook = [](int) { throw Error(ErrorCode::kTransport, "down"); };
  LlmClient dead_client(BackendConfig{}, std::move(dead));
  cfg.max_iterations = 3;
  try {
    run_generation_loop(seeds(), cfg, dead_client);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendExhausted);
  }
}

TEST(Loop, BudgetErrorPropagates) {
  auto spent = std::make_unique<ScriptedGen>();
  spent->hook = [](int) { throw Error(ErrorCode::kBudget, "spent"); };
  LlmClient client(BackendConfig{}, std::move(spent));
  GenerationConfig cfg;
  cfg.target_pool_size = 8;
  try {
    run_generation_loop(seeds(), cfg, client);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudget);
  }
}

TEST(Loop, ConfigValidation) {
  LlmClient client(BackendConfig{}, std::make_unique<ScriptedGen>());
  GenerationConfig cfg;
  cfg.target_pool_size = 2;
  EXPECT_THROW(run_generation_loop(seeds(), cfg, client), Error);
  cfg.target_pool_size = 10;
  cfg.similarity_threshold = 0.0;
  EXPECT_THROW(run_generation_loop(seeds(), cfg, client), Error);
}

TEST(Loop, MockBackendIsDeterministic) {
  BackendConfig bc;
  bc.kind = "mock";
  GenerationConfig cfg;
  cfg.target_pool_size = 20;
  cfg.seed = 5;
  auto a = make_client(bc);
  auto b = make_client(bc);
  const auto s = load_instructions(data_dir() / "instructions" / "manual_seeds.json");
  const auto pa = run_generation_loop(s, cfg, *a);
  const auto pb = run_generation_loop(s, cfg, *b);
  EXPECT_EQ(pa.instructions, pb.instructions);
  EXPECT_EQ(pool_to_json(pa), pool_to_json(pb));
}

TEST(PoolFile, RoundTrip) {
  TempDir dir;
  LlmClient client(BackendConfig{}, std::make_unique<ScriptedGen>());
  GenerationConfig cfg;
  cfg.target_pool_size = 8;
  const auto pool = run_generation_loop(seeds(), cfg, client);
  detail::write_file_atomic(dir / "pool.json", pool_to_json(pool));
  const auto back = load_pool(dir / "pool.json");
  EXPECT_EQ(back.instructions, pool.instructions);
  EXPECT_EQ(back.iteration, pool.iteration);
  EXPECT_EQ(back.backend_calls, pool.backend_calls);
  EXPECT_EQ(load_pool(data_dir() / "instructions" / "manual_seeds.json").size(), 13u);
}

}  // namespace
}  // namespace augmenta
