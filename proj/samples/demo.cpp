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

// Augments a few sentences with two algorithmic methods and one instruction
// answered by the offline mock backend.

#include <iostream>

#include "augmenta/augmenta.hpp"

int main() {
  using namespace augmenta;
  const auto lex = Lexicons::bundled();
  const std::vector<std::string> texts = {
      "the movie was great and i would go again",
      "experts discussed the market after the merger changed",
  };
  for (const auto& t : texts) {
    RngStream a(derive_seed(42, 1));
    RngStream b(derive_seed(42, 2));
    std::cout << "input:        " << t << "\n"
              << "char_swap:    " << augment_char(t, CharEdit::kSwap, 0.3, a, lex) << "\n"
              << "word_delete:  " << augment_word(t, WordEdit::kDelete, 0.3, b, lex) << "\n";
  }

  BackendConfig cfg;
  cfg.kind = "mock";
  auto client = make_client(cfg);
  const auto seeds = load_instructions(data_dir() / "instructions" / "manual_seeds.json");
  Example ex;
  ex.input = texts[0];
  ex.output = "positive";
  const auto rec = llm_augment(seeds[0], ex, *client, "demo", 42);
  std::cout << seeds[0].name << ": " << rec.augmented_input << "\n";
  const auto u = client->ledger().snapshot();
  std::cout << "mock responses: " << u.mock_responses << "\n";
  return 0;
}
