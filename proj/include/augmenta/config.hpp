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

// Experiment configuration. Files use a TOML subset: [section] headers,
// `key = value` lines with strings, integers, floats, booleans and
// single-line arrays of those, and '#' comments.

#ifndef AUGMENTA_CONFIG_HPP_
#define AUGMENTA_CONFIG_HPP_

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "augmenta/augmenters.hpp"
#include "augmenta/backends.hpp"
#include "augmenta/datamodel.hpp"
#include "augmenta/error.hpp"
#include "augmenta/evalharness.hpp"
#include "augmenta/instructgen.hpp"
#include "augmenta/selector.hpp"

namespace augmenta {

namespace detail {

class TomlLine {
 public:
  TomlLine(std::string_view text, std::string where) : s_(text), where_(std::move(where)) {}

  json value() {
    skip_ws();
    json v = parse_value();
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] != '#') fail("trailing characters");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::kConfig, where_ + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  json parse_value() {
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '"') return parse_string();
    if (c == '[') {
      ++pos_;
      json arr = json::array();
      for (;;) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ']') {
          ++pos_;
          return arr;
        }
        arr.push_back(parse_value());
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ',') {
          ++pos_;
        } else if (pos_ >= s_.size() || s_[pos_] != ']') {
          fail("expected ',' or ']' in array");
        }
      }
    }
    std::size_t end = pos_;
    while (end < s_.size() && s_[end] != ',' && s_[end] != ']' && s_[end] != ' ' &&
           s_[end] != '\t' && s_[end] != '#') {
      ++end;
    }
    const std::string_view tok = s_.substr(pos_, end - pos_);
    pos_ = end;
    if (tok == "true") return true;
    if (tok == "false") return false;
    std::string digits;
    for (char ch : tok) {
      if (ch != '_') digits += ch;
    }
    std::int64_t i = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), i);
    if (ec == std::errc() && p == digits.data() + digits.size()) return i;
    double d = 0.0;
    auto [pd, ecd] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
    if (ecd == std::errc() && pd == digits.data() + digits.size()) return d;
    fail("cannot parse value '" + std::string(tok) + "'");
  }

  json parse_string() {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      char ch = s_[pos_++];
      if (ch == '\\') {
        if (pos_ >= s_.size()) fail("unterminated escape");
        const char e = s_[pos_++];
        switch (e) {
          case 'n': ch = '\n'; break;
          case 't': ch = '\t'; break;
          case '"': ch = '"'; break;
          case '\\': ch = '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      }
      out += ch;
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  std::string_view s_;
  std::string where_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Nested JSON object: doc[section][key].
inline json parse_toml(std::string_view text, const std::string& origin = "<config>") {
  json doc = json::object();
  json* section = &doc;
  const auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string where = origin + ":" + std::to_string(i + 1);
    const std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == '[') {
      const auto close = line.find(']');
      if (close == std::string::npos) throw Error(ErrorCode::kConfig, where + ": bad header");
      const std::string name = trim(std::string_view(line).substr(1, close - 1));
      if (name.empty()) throw Error(ErrorCode::kConfig, where + ": empty section name");
      section = &doc[name];
      if (!section->is_object()) *section = json::object();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kConfig, where + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw Error(ErrorCode::kConfig, where + ": empty key");
    if (section->contains(key)) throw Error(ErrorCode::kConfig, where + ": duplicate key " + key);
    (*section)[key] = detail::TomlLine(std::string_view(line).substr(eq + 1), where).value();
  }
  return doc;
}

struct EvaluationConfig {
  std::size_t k = 16;
  std::vector<std::uint64_t> seeds = default_seeds();
  double rate = 0.1;
  SplitSpec split;
};

struct BaselineConfig {
  std::vector<NonLlmMethod> non_llm;
  fs::path manual_file;
  std::vector<SelectorKind> selectors;
  bool original = true;
};

struct PipelineConfig {
  BackendConfig backend;
  GenerationConfig generation;
  fs::path seeds_file;
  fs::path pool_file;  // used instead of generation when set
  TrainHyper selector;
  std::size_t rewards_per_task = 0;
  std::uint64_t selector_seed = 7;
  EvaluationConfig evaluation;
  BaselineConfig baselines;
  fs::path tasks_dir;
  fs::path results_dir;

  void validate() const {
    backend.validate();
    if (evaluation.k == 0) throw Error(ErrorCode::kConfig, "evaluation.k must be >= 1");
    if (evaluation.seeds.empty()) throw Error(ErrorCode::kConfig, "evaluation.seeds is empty");
    if (evaluation.split.test_tasks.empty()) {
      throw Error(ErrorCode::kConfig, "split has no test tasks");
    }
    if (!fs::exists(tasks_dir)) {
      throw Error(ErrorCode::kConfig, "tasks_dir " + tasks_dir.string() + " not found");
    }
    if (pool_file.empty() && !fs::exists(seeds_file)) {
      throw Error(ErrorCode::kConfig, "seeds file " + seeds_file.string() + " not found");
    }
    if (!pool_file.empty() && !fs::exists(pool_file)) {
      throw Error(ErrorCode::kConfig, "pool file " + pool_file.string() + " not found");
    }
    if (!baselines.manual_file.empty() && !fs::exists(baselines.manual_file)) {
      throw Error(ErrorCode::kConfig,
                  "manual instruction file " + baselines.manual_file.string() + " not found");
    }
  }
};

namespace detail {

template <typename T>
T get_or(const json& sec, const char* key, T fallback) {
  if (!sec.is_object() || !sec.contains(key)) return fallback;
  try {
    return sec.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kConfig, std::string("bad type for key '") + key + "'");
  }
}

inline fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

inline SelectorKind parse_selector(std::string_view s) {
  for (auto k : {SelectorKind::kTaskInformed, SelectorKind::kRandom, SelectorKind::kEmpirical,
                 SelectorKind::kLlm}) {
    if (selector_name(k) == s) return k;
  }
  throw Error(ErrorCode::kConfig, "unknown selector '" + std::string(s) + "'");
}

}  // namespace detail

/// Split preset fragment: [split] setting, train_tasks, test_tasks.
inline SplitSpec split_from_json(const json& sec) {
  SplitSpec s;
  s.setting = parse_split_setting(detail::get_or<std::string>(sec, "setting", "random_to_random"));
  s.train_tasks = detail::get_or<std::vector<std::string>>(sec, "train_tasks", {});
  s.test_tasks = detail::get_or<std::vector<std::string>>(sec, "test_tasks", {});
  validate_split(s);
  return s;
}

/// Relative paths resolve against the directory holding the config file.
inline PipelineConfig parse_pipeline_config(std::string_view text, const fs::path& base_dir,
                                            const std::string& origin = "<config>") {
  const json doc = parse_toml(text, origin);
  const json empty = json::object();
  auto sec = [&](const char* name) -> const json& {
    return doc.contains(name) ? doc.at(name) : empty;
  };
  using detail::get_or;
  PipelineConfig c;

  const auto& b = sec("backend");
  c.backend.kind = get_or<std::string>(b, "kind", c.backend.kind);
  c.backend.base_url = get_or<std::string>(b, "base_url", c.backend.base_url);
  c.backend.model = get_or<std::string>(b, "model", c.backend.model);
  c.backend.max_retries = get_or<int>(b, "max_retries", c.backend.max_retries);
  c.backend.max_parallel = get_or<int>(b, "max_parallel", c.backend.max_parallel);
  c.backend.timeout = std::chrono::milliseconds(
      get_or<std::int64_t>(b, "timeout_ms", c.backend.timeout.count()));
  c.backend.budget_tokens = get_or<std::uint64_t>(b, "budget_tokens", c.backend.budget_tokens);
  c.backend.cache_dir = detail::resolve(base_dir, get_or<std::string>(b, "cache_dir", ""));
  c.backend.mock_script = detail::resolve(base_dir, get_or<std::string>(b, "mock_script", ""));

  const auto& g = sec("generation");
  c.generation.target_pool_size = get_or<std::size_t>(g, "target", c.generation.target_pool_size);
  c.generation.similarity_threshold =
      get_or<double>(g, "threshold", c.generation.similarity_threshold);
  c.generation.seeds_per_prompt =
      get_or<std::size_t>(g, "seeds_per_prompt", c.generation.seeds_per_prompt);
  c.generation.max_iterations =
      get_or<std::size_t>(g, "max_iterations", c.generation.max_iterations);
  c.generation.temperature = get_or<double>(g, "temperature", c.generation.temperature);
  c.generation.seed = get_or<std::uint64_t>(g, "seed", c.generation.seed);
  c.seeds_file = detail::resolve(
      base_dir, get_or<std::string>(g, "seeds_file",
                                    (data_dir() / "instructions" / "manual_seeds.json").string()));
  c.pool_file = detail::resolve(base_dir, get_or<std::string>(g, "pool_file", ""));

  const auto& s = sec("selector");
  c.selector.n = get_or<std::size_t>(s, "n", c.selector.n);
  c.selector.m = get_or<std::size_t>(s, "m", c.selector.m);
  c.selector.lr = get_or<double>(s, "lr", c.selector.lr);
  c.selector.epochs = get_or<std::size_t>(s, "epochs", c.selector.epochs);
  c.selector.patience = get_or<std::size_t>(s, "patience", c.selector.patience);
  c.selector.batch_size = get_or<std::size_t>(s, "batch_size", c.selector.batch_size);
  c.selector.model_name = get_or<std::string>(s, "model_name", c.selector.model_name);
  c.rewards_per_task = get_or<std::size_t>(s, "rewards_per_task", 0);
  c.selector_seed = get_or<std::uint64_t>(s, "seed", c.selector_seed);

  const auto& e = sec("evaluation");
  c.evaluation.k = get_or<std::size_t>(e, "k", c.evaluation.k);
  c.evaluation.seeds = get_or<std::vector<std::uint64_t>>(e, "seeds", c.evaluation.seeds);
  c.evaluation.rate = get_or<double>(e, "rate", c.evaluation.rate);
  const std::string preset = get_or<std::string>(e, "split_file", "");
  if (!preset.empty()) {
    const auto path = detail::resolve(base_dir, preset);
    const json frag = parse_toml(detail::read_file(path), path.string());
    c.evaluation.split = split_from_json(frag.contains("split") ? frag.at("split") : frag);
  } else {
    c.evaluation.split = split_from_json(sec("split"));
  }

  const auto& bl = sec("baselines");
  c.baselines.original = get_or<bool>(bl, "original", true);
  for (const auto& m : get_or<std::vector<std::string>>(bl, "non_llm", {})) {
    c.baselines.non_llm.push_back(parse_method(m));
  }
  c.baselines.manual_file = detail::resolve(base_dir, get_or<std::string>(bl, "manual_file", ""));
  for (const auto& k : get_or<std::vector<std::string>>(bl, "selectors", {})) {
    c.baselines.selectors.push_back(detail::parse_selector(k));
  }

  const auto& p = sec("paths");
  c.tasks_dir = detail::resolve(base_dir, get_or<std::string>(p, "tasks_dir", "tasks"));
  c.results_dir = detail::resolve(base_dir, get_or<std::string>(p, "results_dir", "results"));
  return c;
}

inline PipelineConfig load_pipeline_config(const fs::path& path) {
  return parse_pipeline_config(detail::read_file(path), fs::absolute(path).parent_path(),
                               path.string());
}

}  // namespace augmenta

#endif  // AUGMENTA_CONFIG_HPP_
