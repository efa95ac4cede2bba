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

#ifndef AUGMENTA_TESTS_TEST_UTIL_HPP_
#define AUGMENTA_TESTS_TEST_UTIL_HPP_

#include <atomic>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "augmenta/datamodel.hpp"

namespace augmenta::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> n{0};
    path_ = fs::temp_directory_path() /
            ("augmenta_test_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  fs::path path_;
};

/// Two-class task whose label is signalled by a single cue word.
inline TaskDataset cue_task(const std::string& name, std::size_t n_train = 16,
                            std::size_t n_test = 20) {
  TaskDataset t;
  t.task_name = name;
  t.kind = TaskKind::kClassification;
  const std::vector<std::string> opts = {"neg", "pos"};
  auto ex = [&](std::size_t i) {
    const bool pos = i % 2 == 0;
    return Example{"item " + std::to_string(i % 5) + " is " + (pos ? "good" : "bad") +
                       " in every way",
                   pos ? "pos" : "neg", opts};
  };
  for (std::size_t i = 0; i < n_train; ++i) t.train.push_back(ex(i));
  for (std::size_t i = 0; i < 8; ++i) t.dev.push_back(ex(i + 100));
  for (std::size_t i = 0; i < n_test; ++i) t.test.push_back(ex(i + 200));
  return t;
}

}  // namespace augmenta::testing

#endif  // AUGMENTA_TESTS_TEST_UTIL_HPP_
