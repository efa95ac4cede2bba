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

// Instruction pool growth: prompt with sampled seeds, parse, filter by
// ROUGE-L against the pool, repeat until the target size, dedup by name.

#ifndef AUGMENTA_INSTRUCTGEN_HPP_
#define AUGMENTA_INSTRUCTGEN_HPP_

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "augmenta/backends.hpp"
#include "augmenta/datamodel.hpp"
#include "augmenta/error.hpp"
#include "augmenta/textcore.hpp"

namespace augmenta {

struct GenerationConfig {
  std::size_t target_pool_size = 100;
  double similarity_threshold = 0.7;
  std::size_t seeds_per_prompt = 8;
  std::size_t max_iterations = 50;
  double temperature = 0.7;
  std::uint64_t seed = 0;

  void validate(std::size_t n_seeds) const {
    if (!(similarity_threshold > 0.0 && similarity_threshold < 1.0)) {
      throw Error(ErrorCode::kConfig, "similarity_threshold must be in (0, 1)");
    }
    if (target_pool_size == 0 || seeds_per_prompt == 0 || max_iterations == 0) {
      throw Error(ErrorCode::kConfig,
                  "target_pool_size, seeds_per_prompt and max_iterations must "
                  "be positive");
    }
    if (target_pool_size < n_seeds) {
      throw Error(ErrorCode::kConfig,
                  "target_pool_size is smaller than the seed set");
    }
  }
};

struct GenerationLogEntry {
  std::size_t iteration = 0;
  std::string prompt_key;
  std::string name;
  bool accepted = false;
  double score = 0.0;
};

struct InstructionPool {
  std::vector<Instruction> instructions;
  std::vector<std::size_t> iteration;  // 0 for seeds
  std::vector<GenerationLogEntry> log;
  std::size_t backend_calls = 0;
  std::size_t failed_calls = 0;
  bool target_reached = true;

  std::size_t size() const { return instructions.size(); }

  static InstructionPool from(std::vector<Instruction> xs) {
    InstructionPool p;
    p.iteration.assign(xs.size(), 0);
    p.instructions = std::move(xs);
    return p;
  }

  void push(Instruction ins, std::size_t iter) {
    instructions.push_back(std::move(ins));
    iteration.push_back(iter);
  }
};

inline constexpr std::string_view kGenerationPrompt =
    "Come up with a series of textual data augmentation methods and you need "
    "to generate more diverse data augmentation method that can keep the "
    "semantic meaning of the input sentence.";

inline ChatRequest build_generation_prompt(std::span<const Instruction> sample,
                                           const std::string& model = "gpt-3.5-turbo",
                                           double temperature = 0.7) {
  if (sample.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "generation prompt needs seeds");
  }
  std::string p(kGenerationPrompt);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    p += '\n';
    p += std::to_string(i + 1) + ". " + render_instruction(sample[i]);
  }
  return user_request(model, std::move(p), temperature);
}

namespace detail {

inline std::string_view strip_list_marker(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i > 0 && i < line.size() && (line[i] == '.' || line[i] == ')')) {
    line.remove_prefix(i + 1);
  } else if (!line.empty() && (line[0] == '-' || line[0] == '*')) {
    line.remove_prefix(1);
  }
  return line;
}

}  // namespace detail

inline std::vector<Instruction> parse_instructions(std::string_view llm_output) {
  std::vector<Instruction> out;
  for (const auto& raw : detail::split_lines(llm_output)) {
    const std::string line = trim(raw);
    const std::string item = trim(detail::strip_list_marker(line));
    auto parsed = parse_rendered_instruction(item, InstructionOrigin::kLlmGenerated);
    if (!parsed) continue;
    // Markdown bold around names ("**Name**: body") is common in chat output.
    std::string name = parsed->name;
    std::erase(name, '*');
    name = trim(name);
    if (name.empty()) continue;
    out.push_back({std::move(name), parsed->body, InstructionOrigin::kLlmGenerated});
  }
  return out;
}

inline double max_similarity(const TokenSeq& body,
                             const std::vector<TokenSeq>& others) {
  double best = 0.0;
  for (const auto& o : others) best = std::max(best, rouge_l(body, o));
  return best;
}

/// Order-dependent: each candidate is compared with the pool and with the
/// candidates accepted before it. `scores` receives the max similarity.
inline std::vector<Instruction> filter_similar(
    const std::vector<Instruction>& candidates, const InstructionPool& pool,
    double threshold, std::vector<double>* scores = nullptr) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must be in (0, 1)");
  }
  std::vector<TokenSeq> seen;
  seen.reserve(pool.size() + candidates.size());
  for (const auto& ins : pool.instructions) seen.push_back(tokenize(ins.body));
  std::vector<Instruction> accepted;
  for (const auto& c : candidates) {
    auto toks = tokenize(c.body);
    const double s = max_similarity(toks, seen);
    if (scores) scores->push_back(s);
    if (s < threshold) {
      accepted.push_back(c);
      seen.push_back(std::move(toks));
    }
  }
  return accepted;
}

inline std::string normalize_name(std::string_view name) {
  std::string out;
  for (const auto& t : tokenize(name)) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

inline InstructionPool dedup_by_name(const InstructionPool& pool) {
  InstructionPool out;
  out.log = pool.log;
  out.backend_calls = pool.backend_calls;
  out.failed_calls = pool.failed_calls;
  out.target_reached = pool.target_reached;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (seen.insert(normalize_name(pool.instructions[i].name)).second) {
      out.push(pool.instructions[i],
               i < pool.iteration.size() ? pool.iteration[i] : 0);
    }
  }
  return out;
}

/// Stops at the first iteration whose pool reaches the target, truncates to
/// the target in pool order, then dedups by name. A failed call counts as an
/// iteration. target_reached is false when max_iterations ran out first.
inline InstructionPool run_generation_loop(const std::vector<Instruction>& seeds,
                                           const GenerationConfig& cfg,
                                           LlmClient& client) {
  if (seeds.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "generation needs seed instructions");
  }
  cfg.validate(seeds.size());
  InstructionPool pool = InstructionPool::from(seeds);
  std::string last_error;
  for (std::size_t iter = 1;
       iter <= cfg.max_iterations && pool.size() < cfg.target_pool_size; ++iter) {
    RngStream rng(derive_seed(cfg.seed, iter));
    auto idx = rng.sample_indices(pool.size(),
                                  std::min(cfg.seeds_per_prompt, pool.size()));
    std::vector<Instruction> sample;
    for (auto i : idx) sample.push_back(pool.instructions[i]);
    const auto req =
        build_generation_prompt(sample, client.config().model, cfg.temperature);
    const std::string key = cache_key(req);
    ++pool.backend_calls;
    std::string reply;
    try {
      reply = client.chat_complete(req);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kBudget) throw;
      ++pool.failed_calls;
      last_error = e.what();
      continue;
    }
    const auto candidates = parse_instructions(reply);
    std::vector<double> scores;
    const auto accepted =
        filter_similar(candidates, pool, cfg.similarity_threshold, &scores);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      pool.log.push_back({iter, key, candidates[c].name,
                          scores[c] < cfg.similarity_threshold, scores[c]});
    }
    for (const auto& a : accepted) pool.push(a, iter);
  }
  if (pool.failed_calls > 0 && pool.failed_calls == pool.backend_calls) {
    throw Error(ErrorCode::kBackendExhausted,
                "every generation call failed: " + last_error);
  }
  pool.target_reached = pool.size() >= cfg.target_pool_size;
  if (pool.size() > cfg.target_pool_size) {
    pool.instructions.resize(cfg.target_pool_size);
    pool.iteration.resize(cfg.target_pool_size);
  }
  return dedup_by_name(pool);
}

// ---------------------------------------------------------------------------
// Pool files

inline std::string pool_to_json(const InstructionPool& pool) {
  ordered_json doc;
  doc["instructions"] = ordered_json::array();
  for (std::size_t i = 0; i < pool.size(); ++i) {
    auto o = instruction_to_json(pool.instructions[i]);
    o["iteration"] = i < pool.iteration.size() ? pool.iteration[i] : 0;
    doc["instructions"].push_back(std::move(o));
  }
  doc["target_reached"] = pool.target_reached;
  doc["backend_calls"] = pool.backend_calls;
  doc["failed_calls"] = pool.failed_calls;
  doc["log"] = ordered_json::array();
  for (const auto& e : pool.log) {
    ordered_json o;
    o["iteration"] = e.iteration;
    o["prompt_key"] = e.prompt_key;
    o["name"] = e.name;
    o["accepted"] = e.accepted;
    o["score"] = e.score;
    doc["log"].push_back(std::move(o));
  }
  return doc.dump(2) + "\n";
}

/// Reads a pool file or a plain instruction array.
inline InstructionPool load_pool(const fs::path& path) {
  InstructionPool pool = InstructionPool::from(load_instructions(path));
  try {
    const json doc = json::parse(detail::read_file(path));
    if (doc.is_object()) {
      const auto& arr = doc.at("instructions");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        if (arr[i].contains("iteration")) {
          pool.iteration[i] = arr[i]["iteration"].get<std::size_t>();
        }
      }
      pool.target_reached = doc.value("target_reached", true);
      pool.backend_calls = doc.value("backend_calls", std::size_t{0});
      pool.failed_calls = doc.value("failed_calls", std::size_t{0});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, path.string() + ": " + e.what());
  }
  return pool;
}

}  // namespace augmenta

#endif  // AUGMENTA_INSTRUCTGEN_HPP_
