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

// Tasks, examples, instructions and augmentation records, plus the on-disk
// formats for each of them.
//
// Task directory layout: for every task `foo` there is a `foo.jsonl` with one
// {"split","input","output","options"} object per line and a sidecar
// `foo.manifest.json` holding {"task","kind"}.

#ifndef AUGMENTA_DATAMODEL_HPP_
#define AUGMENTA_DATAMODEL_HPP_

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "augmenta/error.hpp"
#include "augmenta/textcore.hpp"
#include "json.hpp"

namespace augmenta {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

enum class TaskKind { kClassification, kNonClassification };

inline std::string_view task_kind_name(TaskKind kind) {
  return kind == TaskKind::kClassification ? "classification"
                                           : "non_classification";
}

inline TaskKind parse_task_kind(std::string_view s) {
  if (s == "classification") return TaskKind::kClassification;
  if (s == "non_classification") return TaskKind::kNonClassification;
  throw Error(ErrorCode::kMalformedRecord,
              "unknown task kind '" + std::string(s) + "'");
}

struct Example {
  std::string input;
  std::string output;
  std::vector<std::string> candidates;

  bool operator==(const Example&) const = default;
};

struct TaskDataset {
  std::string task_name;
  TaskKind kind = TaskKind::kClassification;
  std::vector<Example> train;
  std::vector<Example> dev;
  std::vector<Example> test;

  bool operator==(const TaskDataset&) const = default;
};

enum class InstructionOrigin { kSeedManual, kLlmGenerated };

inline std::string_view origin_name(InstructionOrigin o) {
  return o == InstructionOrigin::kSeedManual ? "seed_manual" : "llm_generated";
}

inline InstructionOrigin parse_origin(std::string_view s) {
  if (s == "seed_manual") return InstructionOrigin::kSeedManual;
  if (s == "llm_generated") return InstructionOrigin::kLlmGenerated;
  throw Error(ErrorCode::kMalformedRecord,
              "unknown instruction origin '" + std::string(s) + "'");
}

struct Instruction {
  std::string name;
  std::string body;
  InstructionOrigin origin = InstructionOrigin::kLlmGenerated;

  bool operator==(const Instruction&) const = default;
};

/// Trims both fields and rejects empty ones or names containing ':' (the
/// rendered form uses the first colon as the delimiter).
inline Instruction make_instruction(std::string_view name,
                                    std::string_view body,
                                    InstructionOrigin origin) {
  Instruction ins{trim(name), trim(body), origin};
  if (ins.name.empty() || ins.body.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "instruction name and body must be non-empty");
  }
  if (ins.name.find(':') != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "instruction name may not contain ':' (" + ins.name + ")");
  }
  return ins;
}

inline std::string render_instruction(const Instruction& ins) {
  return trim(ins.name) + ": " + trim(ins.body);
}

/// Inverse of render_instruction; the first colon delimits the name.
inline std::optional<Instruction> parse_rendered_instruction(
    std::string_view text, InstructionOrigin origin) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  const std::string name = trim(text.substr(0, colon));
  const std::string body = trim(text.substr(colon + 1));
  if (name.empty() || body.empty()) return std::nullopt;
  return Instruction{name, body, origin};
}

/// One (augmented input, original example) pair. There is deliberately no
/// label field: the training label is always original.output.
struct AugmentationRecord {
  std::string task_name;
  std::string method_id;
  Example original;
  std::string augmented_input;
  std::uint64_t seed = 0;
  std::optional<std::string> backend_fingerprint;
  std::vector<std::string> flags;

  bool operator==(const AugmentationRecord&) const = default;
};

struct TrainingPair {
  std::string input;
  std::string output;
  std::vector<std::string> candidates;
};

inline TrainingPair training_pair(const Example& ex) {
  return {ex.input, ex.output, ex.candidates};
}

inline TrainingPair training_pair(const AugmentationRecord& rec) {
  return {rec.augmented_input, rec.original.output, rec.original.candidates};
}

enum class SplitSetting {
  kClassToClass,
  kClassToNonClass,
  kNonClassToClass,
  kRandomToRandom
};

inline std::string_view split_setting_name(SplitSetting s) {
  switch (s) {
    case SplitSetting::kClassToClass: return "class_to_class";
    case SplitSetting::kClassToNonClass: return "class_to_nonclass";
    case SplitSetting::kNonClassToClass: return "nonclass_to_class";
    case SplitSetting::kRandomToRandom: return "random_to_random";
  }
  return "random_to_random";
}

inline SplitSetting parse_split_setting(std::string_view s) {
  if (s == "class_to_class") return SplitSetting::kClassToClass;
  if (s == "class_to_nonclass") return SplitSetting::kClassToNonClass;
  if (s == "nonclass_to_class") return SplitSetting::kNonClassToClass;
  if (s == "random_to_random") return SplitSetting::kRandomToRandom;
  throw Error(ErrorCode::kConfig, "unknown split setting '" + std::string(s) +
                                      "'");
}

struct SplitSpec {
  SplitSetting setting = SplitSetting::kRandomToRandom;
  std::vector<std::string> train_tasks;
  std::vector<std::string> test_tasks;
};

inline void validate_split(const SplitSpec& split) {
  const std::set<std::string> train(split.train_tasks.begin(),
                                    split.train_tasks.end());
  for (const auto& t : split.test_tasks) {
    if (train.count(t)) {
      throw Error(ErrorCode::kConfig,
                  "task '" + t + "' is in both train and test splits");
    }
  }
}

/// Root of the bundled data files: $AUGMENTA_DATA_DIR, else the path baked
/// in at build time, else ./data.
inline fs::path data_dir() {
  if (const char* env = std::getenv("AUGMENTA_DATA_DIR")) return env;
#ifdef AUGMENTA_DATA_DIR
  return AUGMENTA_DATA_DIR;
#else
  return "data";
#endif
}

// ---------------------------------------------------------------------------
// Task files

namespace detail {

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::kIo, "short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
  }
  return lines;
}

inline std::string where(const fs::path& file, std::size_t line) {
  return file.string() + ":" + std::to_string(line);
}

inline std::vector<std::string> sorted_copy(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace detail

/// Validates example- and task-level invariants; `origin` is used in error
/// messages only.
inline void validate_task(const TaskDataset& task, const std::string& origin) {
  if (task.task_name.empty()) {
    throw Error(ErrorCode::kMalformedRecord, origin + ": empty task name");
  }
  std::optional<std::vector<std::string>> label_set;
  auto check = [&](const Example& ex, std::string_view split, std::size_t i) {
    const std::string at =
        origin + " [" + std::string(split) + " #" + std::to_string(i) + "]";
    if (trim(ex.input).empty()) {
      throw Error(ErrorCode::kMalformedRecord, at + ": empty input");
    }
    if (task.kind == TaskKind::kClassification) {
      if (ex.candidates.empty()) {
        throw Error(ErrorCode::kMissingCandidates,
                    at + ": classification example without options");
      }
      const auto sorted = detail::sorted_copy(ex.candidates);
      if (!label_set) {
        label_set = sorted;
      } else if (*label_set != sorted) {
        throw Error(ErrorCode::kMalformedRecord,
                    at + ": options differ from the task's label set");
      }
    }
    if (!ex.candidates.empty() &&
        std::find(ex.candidates.begin(), ex.candidates.end(), ex.output) ==
            ex.candidates.end()) {
      throw Error(ErrorCode::kMalformedRecord,
                  at + ": output '" + ex.output + "' is not among options");
    }
  };
  for (std::size_t i = 0; i < task.train.size(); ++i) check(task.train[i], "train", i);
  for (std::size_t i = 0; i < task.dev.size(); ++i) check(task.dev[i], "dev", i);
  for (std::size_t i = 0; i < task.test.size(); ++i) check(task.test[i], "test", i);
}

/// Parses one task JSONL body. Line numbers in errors are 1-based.
inline TaskDataset parse_task_jsonl(std::string_view text,
                                    const std::string& task_name,
                                    TaskKind kind, const fs::path& file) {
  TaskDataset task;
  task.task_name = task_name;
  task.kind = kind;
  const auto lines = detail::split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string& line = lines[ln];
    if (trim(line).empty()) continue;
    const std::string at = detail::where(file, ln + 1);
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedRecord, at + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("split") || !obj.contains("input") ||
        !obj.contains("output") || !obj["split"].is_string() ||
        !obj["input"].is_string() || !obj["output"].is_string()) {
      throw Error(ErrorCode::kMalformedRecord,
                  at + ": expected string fields split/input/output");
    }
    Example ex;
    ex.input = obj["input"].get<std::string>();
    ex.output = obj["output"].get<std::string>();
    if (obj.contains("options")) {
      if (!obj["options"].is_array()) {
        throw Error(ErrorCode::kMalformedRecord, at + ": options must be a list");
      }
      for (const auto& o : obj["options"]) {
        if (!o.is_string()) {
          throw Error(ErrorCode::kMalformedRecord,
                      at + ": options must be strings");
        }
        ex.candidates.push_back(o.get<std::string>());
      }
    }
    if (trim(ex.input).empty()) {
      throw Error(ErrorCode::kMalformedRecord, at + ": empty input");
    }
    if (kind == TaskKind::kClassification && ex.candidates.empty()) {
      throw Error(ErrorCode::kMissingCandidates,
                  at + ": classification record without options");
    }
    if (!ex.candidates.empty() &&
        std::find(ex.candidates.begin(), ex.candidates.end(), ex.output) ==
            ex.candidates.end()) {
      throw Error(ErrorCode::kMalformedRecord,
                  at + ": output '" + ex.output + "' is not among options");
    }
    const auto split = obj["split"].get<std::string>();
    if (split == "train") {
      task.train.push_back(std::move(ex));
    } else if (split == "dev") {
      task.dev.push_back(std::move(ex));
    } else if (split == "test") {
      task.test.push_back(std::move(ex));
    } else {
      throw Error(ErrorCode::kMalformedRecord,
                  at + ": unknown split '" + split + "'");
    }
  }
  validate_task(task, file.string());
  return task;
}

inline TaskDataset load_task_file(const fs::path& jsonl) {
  fs::path manifest_path = jsonl;
  manifest_path.replace_extension(".manifest.json");
  json manifest;
  try {
    manifest = json::parse(detail::read_file(manifest_path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord,
                manifest_path.string() + ": " + e.what());
  }
  if (!manifest.contains("task") || !manifest["task"].is_string() ||
      !manifest.contains("kind") || !manifest["kind"].is_string()) {
    throw Error(ErrorCode::kMalformedRecord,
                manifest_path.string() + ": expected {\"task\",\"kind\"}");
  }
  return parse_task_jsonl(detail::read_file(jsonl),
                          manifest["task"].get<std::string>(),
                          parse_task_kind(manifest["kind"].get<std::string>()),
                          jsonl);
}

/// Loads every `*.jsonl` task under `path` (or the single file `path`), in
/// filename order.
inline std::vector<TaskDataset> load_tasks(const fs::path& path) {
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else if (fs::exists(path)) {
    files.push_back(path);
  } else {
    throw Error(ErrorCode::kIo, "no such task path " + path.string());
  }
  std::vector<TaskDataset> tasks;
  std::map<std::string, fs::path> seen;
  for (const auto& f : files) {
    TaskDataset t = load_task_file(f);
    auto [it, inserted] = seen.emplace(t.task_name, f);
    if (!inserted) {
      throw Error(ErrorCode::kDuplicateTaskName,
                  "task '" + t.task_name + "' declared by both " +
                      it->second.string() + " and " + f.string());
    }
    tasks.push_back(std::move(t));
  }
  return tasks;
}

/// Canonical JSONL: train, then dev, then test, each in stored order.
inline std::string task_to_jsonl(const TaskDataset& task) {
  std::string out;
  auto emit = [&](const std::vector<Example>& xs, const char* split) {
    for (const auto& ex : xs) {
      ordered_json o;
      o["split"] = split;
      o["input"] = ex.input;
      o["output"] = ex.output;
      o["options"] = ex.candidates;
      out += o.dump();
      out += '\n';
    }
  };
  emit(task.train, "train");
  emit(task.dev, "dev");
  emit(task.test, "test");
  return out;
}

inline std::string task_manifest(const TaskDataset& task) {
  ordered_json m;
  m["task"] = task.task_name;
  m["kind"] = task_kind_name(task.kind);
  return m.dump() + "\n";
}

/// Writes `<dir>/<file_stem>.jsonl` and its manifest.
inline void write_task(const fs::path& dir, const TaskDataset& task,
                       std::string file_stem = {}) {
  if (file_stem.empty()) file_stem = task.task_name;
  detail::write_file_atomic(dir / (file_stem + ".jsonl"), task_to_jsonl(task));
  detail::write_file_atomic(dir / (file_stem + ".manifest.json"),
                            task_manifest(task));
}

inline const TaskDataset& find_task(const std::vector<TaskDataset>& tasks,
                                    std::string_view name) {
  for (const auto& t : tasks) {
    if (t.task_name == name) return t;
  }
  throw Error(ErrorCode::kConfig, "unknown task '" + std::string(name) + "'");
}

/// Uniform sample of k training examples without replacement, no label
/// balancing. The kept examples stay in file order.
inline TaskDataset sample_few_shot(const TaskDataset& task, std::size_t k,
                                   std::uint64_t seed) {
  if (k == 0 || task.train.size() < k) {
    throw Error(ErrorCode::kInsufficientExamples,
                task.task_name + ": need " + std::to_string(k) +
                    " training examples, have " +
                    std::to_string(task.train.size()));
  }
  RngStream rng(seed);
  auto idx = rng.sample_indices(task.train.size(), k);
  std::sort(idx.begin(), idx.end());
  TaskDataset out = task;
  out.train.clear();
  for (auto i : idx) out.train.push_back(task.train[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Instruction files

inline ordered_json instruction_to_json(const Instruction& ins) {
  ordered_json o;
  o["name"] = ins.name;
  o["body"] = ins.body;
  o["origin"] = origin_name(ins.origin);
  return o;
}

inline Instruction instruction_from_json(const json& o) {
  if (!o.is_object() || !o.contains("name") || !o.contains("body") ||
      !o["name"].is_string() || !o["body"].is_string()) {
    throw Error(ErrorCode::kMalformedRecord,
                "instruction needs string fields name/body");
  }
  const auto origin = o.contains("origin")
                          ? parse_origin(o["origin"].get<std::string>())
                          : InstructionOrigin::kLlmGenerated;
  return make_instruction(o["name"].get<std::string>(),
                          o["body"].get<std::string>(), origin);
}

inline std::string instructions_to_json(const std::vector<Instruction>& xs) {
  ordered_json arr = ordered_json::array();
  for (const auto& x : xs) arr.push_back(instruction_to_json(x));
  return arr.dump(2) + "\n";
}

/// Accepts a plain JSON array of instructions or an object with an
/// "instructions" array (the pool format written by gen-instructions).
inline std::vector<Instruction> load_instructions(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(detail::read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, path.string() + ": " + e.what());
  }
  const json& arr = doc.is_object() && doc.contains("instructions")
                        ? doc["instructions"]
                        : doc;
  if (!arr.is_array()) {
    throw Error(ErrorCode::kMalformedRecord,
                path.string() + ": expected an array of instructions");
  }
  std::vector<Instruction> out;
  for (const auto& o : arr) out.push_back(instruction_from_json(o));
  return out;
}

// ---------------------------------------------------------------------------
// Augmentation records

inline ordered_json record_to_json(const AugmentationRecord& r) {
  ordered_json o;
  o["task"] = r.task_name;
  o["method_id"] = r.method_id;
  o["input"] = r.original.input;
  o["augmented_input"] = r.augmented_input;
  o["output"] = r.original.output;
  o["seed"] = r.seed;
  o["flags"] = r.flags;
  o["options"] = r.original.candidates;
  if (r.backend_fingerprint) o["backend"] = *r.backend_fingerprint;
  return o;
}

inline AugmentationRecord record_from_json(const json& o) {
  AugmentationRecord r;
  try {
    r.task_name = o.at("task").get<std::string>();
    r.method_id = o.at("method_id").get<std::string>();
    r.original.input = o.at("input").get<std::string>();
    r.augmented_input = o.at("augmented_input").get<std::string>();
    r.original.output = o.at("output").get<std::string>();
    r.seed = o.at("seed").get<std::uint64_t>();
    if (o.contains("flags")) r.flags = o["flags"].get<std::vector<std::string>>();
    if (o.contains("options")) {
      r.original.candidates = o["options"].get<std::vector<std::string>>();
    }
    if (o.contains("backend")) r.backend_fingerprint = o["backend"].get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, e.what());
  }
  return r;
}

inline std::string records_to_jsonl(const std::vector<AugmentationRecord>& rs) {
  std::string out;
  for (const auto& r : rs) {
    out += record_to_json(r).dump();
    out += '\n';
  }
  return out;
}

inline std::vector<AugmentationRecord> load_records(const fs::path& path) {
  std::vector<AugmentationRecord> out;
  const auto lines = detail::split_lines(detail::read_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    try {
      out.push_back(record_from_json(json::parse(lines[i])));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedRecord,
                  detail::where(path, i + 1) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::kMalformedRecord,
                  detail::where(path, i + 1) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace augmenta

#endif  // AUGMENTA_DATAMODEL_HPP_
