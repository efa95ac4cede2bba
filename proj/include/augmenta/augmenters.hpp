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

// Label-preserving transforms: thirteen algorithmic augmenters (character,
// word and contextual level), the instruction-driven LLM augmenter, and
// dataset-level application producing one record per training example.

#ifndef AUGMENTA_AUGMENTERS_HPP_
#define AUGMENTA_AUGMENTERS_HPP_

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "augmenta/backends.hpp"
#include "augmenta/datamodel.hpp"
#include "augmenta/error.hpp"
#include "augmenta/parallel.hpp"
#include "augmenta/textcore.hpp"

namespace augmenta {

enum class NonLlmMethod {
  kCharSwap,
  kCharOcr,
  kCharDelete,
  kCharInsert,
  kCharSubstitute,
  kWordSwap,
  kWordDelete,
  kSpellError,
  kLmInsert,
  kEmbedInsert,
  kLmSubstitute,
  kEmbedSubstitute,
  kBackTranslation,
};

inline constexpr NonLlmMethod kAllNonLlmMethods[] = {
    NonLlmMethod::kCharSwap,        NonLlmMethod::kCharOcr,
    NonLlmMethod::kCharDelete,      NonLlmMethod::kCharInsert,
    NonLlmMethod::kCharSubstitute,  NonLlmMethod::kWordSwap,
    NonLlmMethod::kWordDelete,      NonLlmMethod::kSpellError,
    NonLlmMethod::kLmInsert,        NonLlmMethod::kEmbedInsert,
    NonLlmMethod::kLmSubstitute,    NonLlmMethod::kEmbedSubstitute,
    NonLlmMethod::kBackTranslation,
};

inline std::string_view method_name(NonLlmMethod m) {
  switch (m) {
    case NonLlmMethod::kCharSwap: return "char_swap";
    case NonLlmMethod::kCharOcr: return "char_ocr";
    case NonLlmMethod::kCharDelete: return "char_delete";
    case NonLlmMethod::kCharInsert: return "char_insert";
    case NonLlmMethod::kCharSubstitute: return "char_substitute";
    case NonLlmMethod::kWordSwap: return "word_swap";
    case NonLlmMethod::kWordDelete: return "word_delete";
    case NonLlmMethod::kSpellError: return "spell_error";
    case NonLlmMethod::kLmInsert: return "lm_insert";
    case NonLlmMethod::kEmbedInsert: return "embed_insert";
    case NonLlmMethod::kLmSubstitute: return "lm_substitute";
    case NonLlmMethod::kEmbedSubstitute: return "embed_substitute";
    case NonLlmMethod::kBackTranslation: return "back_translation";
  }
  return "";
}

inline NonLlmMethod parse_method(std::string_view s) {
  for (auto m : kAllNonLlmMethods) {
    if (method_name(m) == s) return m;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown augmentation method '" + std::string(s) + "'");
}

/// Methods that call the language model.
inline bool needs_backend(NonLlmMethod m) {
  return m == NonLlmMethod::kLmInsert || m == NonLlmMethod::kLmSubstitute ||
         m == NonLlmMethod::kBackTranslation;
}

/// Either one of the thirteen algorithmic methods or an instruction applied
/// through the LLM meta prompt.
struct AugmenterSpec {
  std::variant<NonLlmMethod, Instruction> method = NonLlmMethod::kCharSwap;
  double rate = 0.1;
  std::uint64_t seed = 0;
  int repetitions = 1;

  std::string method_id() const {
    if (const auto* m = std::get_if<NonLlmMethod>(&method)) {
      return std::string(method_name(*m));
    }
    return std::get<Instruction>(method).name;
  }

  bool uses_backend() const {
    if (const auto* m = std::get_if<NonLlmMethod>(&method)) {
      return needs_backend(*m);
    }
    return true;
  }

  void validate() const {
    if (!(rate > 0.0 && rate <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "rate must be in (0, 1]");
    }
    if (repetitions < 1) {
      throw Error(ErrorCode::kInvalidArgument, "repetitions must be >= 1");
    }
  }
};

// ---------------------------------------------------------------------------
// Lexicons

/// OCR confusions, misspellings and synonyms. Each TSV line is
/// `key<TAB>value[<TAB>value...]`; '#' starts a comment line.
struct Lexicons {
  std::map<char32_t, std::vector<char32_t>> ocr;
  std::map<std::string, std::vector<std::string>> misspellings;
  std::map<std::string, std::vector<std::string>> synonyms;

  static std::map<std::string, std::vector<std::string>> read_tsv(
      const fs::path& path) {
    std::map<std::string, std::vector<std::string>> table;
    const auto lines = detail::split_lines(detail::read_file(path));
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto& line = lines[i];
      if (line.empty() || line[0] == '#') continue;
      std::vector<std::string> cols;
      std::size_t start = 0;
      for (;;) {
        const auto tab = line.find('\t', start);
        cols.push_back(trim(line.substr(start, tab - start)));
        if (tab == std::string::npos) break;
        start = tab + 1;
      }
      std::erase_if(cols, [](const std::string& c) { return c.empty(); });
      if (cols.size() < 2) {
        throw Error(ErrorCode::kMalformedRecord,
                    detail::where(path, i + 1) + ": expected key and value");
      }
      auto& values = table[cols[0]];
      values.insert(values.end(), cols.begin() + 1, cols.end());
    }
    return table;
  }

  static Lexicons load(const fs::path& ocr_tsv, const fs::path& misspell_tsv,
                       const fs::path& synonym_tsv) {
    Lexicons lex;
    for (const auto& [k, vs] : read_tsv(ocr_tsv)) {
      const auto key = utf8::decode(k);
      if (key.size() != 1) {
        throw Error(ErrorCode::kMalformedRecord,
                    ocr_tsv.string() + ": OCR keys must be single characters");
      }
      for (const auto& v : vs) {
        const auto val = utf8::decode(v);
        if (val.size() != 1) {
          throw Error(ErrorCode::kMalformedRecord,
                      ocr_tsv.string() + ": OCR values must be single characters");
        }
        lex.ocr[key[0]].push_back(val[0]);
      }
    }
    lex.misspellings = read_tsv(misspell_tsv);
    lex.synonyms = read_tsv(synonym_tsv);
    return lex;
  }

  /// The bundled tables under data_dir()/lexicon.
  static const Lexicons& bundled() {
    static const Lexicons kLex = load(data_dir() / "lexicon" / "ocr.tsv",
                                      data_dir() / "lexicon" / "misspellings.tsv",
                                      data_dir() / "lexicon" / "synonyms.tsv");
    return kLex;
  }
};

// ---------------------------------------------------------------------------
// Word segmentation that keeps the original separators

namespace detail {

/// text == seps[0] + words[0] + seps[1] + ... + words[n-1] + seps[n]
struct Segmented {
  std::vector<std::string> seps;
  std::vector<std::string> words;

  static Segmented of(std::string_view text) {
    Segmented s;
    std::string sep;
    std::string word;
    for (char32_t cp : utf8::decode(text)) {
      if (utf8::is_space(cp)) {
        if (!word.empty()) {
          s.words.push_back(std::move(word));
          word.clear();
        }
        utf8::append(sep, cp);
      } else {
        if (word.empty()) {
          s.seps.push_back(std::move(sep));
          sep.clear();
        }
        utf8::append(word, cp);
      }
    }
    if (!word.empty()) s.words.push_back(std::move(word));
    s.seps.push_back(std::move(sep));
    return s;
  }

  std::string str() const {
    std::string out = seps[0];
    for (std::size_t i = 0; i < words.size(); ++i) {
      out += words[i];
      out += seps[i + 1];
    }
    return out;
  }
};

inline bool is_ascii_punct(char32_t cp) {
  return cp < 0x80 && std::ispunct(static_cast<int>(cp));
}

/// Splits "(Word)," into prefix "(", core "Word", suffix "),".
struct WordParts {
  std::string prefix;
  std::string core;
  std::string suffix;

  static WordParts of(std::string_view word) {
    const auto cps = utf8::decode(word);
    std::size_t b = 0;
    std::size_t e = cps.size();
    while (b < e && is_ascii_punct(cps[b])) ++b;
    while (e > b && is_ascii_punct(cps[e - 1])) --e;
    const std::u32string_view v(cps);
    return {utf8::encode(v.substr(0, b)), utf8::encode(v.substr(b, e - b)),
            utf8::encode(v.substr(e))};
  }

  std::string lower_core() const {
    std::string out;
    for (char32_t cp : utf8::decode(core)) utf8::append(out, utf8::to_lower(cp));
    return out;
  }

  /// Replacement that keeps a leading capital of the original core.
  std::string with_core(std::string replacement) const {
    if (!core.empty() && std::isupper(static_cast<unsigned char>(core[0])) &&
        !replacement.empty()) {
      replacement[0] = static_cast<char>(
          std::toupper(static_cast<unsigned char>(replacement[0])));
    }
    return prefix + replacement + suffix;
  }
};

inline char32_t random_letter(RngStream& rng) {
  return U'a' + static_cast<char32_t>(rng.uniform_int(26));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Character level

enum class CharEdit { kSwap, kOcr, kDelete, kInsert, kSubstitute };

/// Each word is selected independently with probability `rate` and receives
/// exactly one character edit. Separators and word count are unchanged.
inline std::string augment_char(std::string_view text, CharEdit kind,
                                double rate, RngStream& rng,
                                const Lexicons& lex = Lexicons::bundled()) {
  auto seg = detail::Segmented::of(text);
  for (auto& word : seg.words) {
    if (!(rng.uniform() < rate)) continue;
    auto cps = utf8::decode(word);
    const std::size_t n = cps.size();
    switch (kind) {
      case CharEdit::kSwap:
        if (n >= 2) {
          const auto p = static_cast<std::size_t>(rng.uniform_int(n - 1));
          std::swap(cps[p], cps[p + 1]);
        }
        break;
      case CharEdit::kOcr: {
        std::vector<std::size_t> positions;
        for (std::size_t i = 0; i < n; ++i) {
          if (lex.ocr.count(cps[i])) positions.push_back(i);
        }
        if (!positions.empty()) {
          const auto p = positions[rng.uniform_int(positions.size())];
          const auto& options = lex.ocr.at(cps[p]);
          cps[p] = options[rng.uniform_int(options.size())];
        }
        break;
      }
      case CharEdit::kDelete:
        if (n >= 2) {
          cps.erase(cps.begin() +
                    static_cast<std::ptrdiff_t>(rng.uniform_int(n)));
        }
        break;
      case CharEdit::kInsert: {
        const auto p = static_cast<std::ptrdiff_t>(rng.uniform_int(n + 1));
        cps.insert(cps.begin() + p, detail::random_letter(rng));
        break;
      }
      case CharEdit::kSubstitute: {
        const auto p = static_cast<std::size_t>(rng.uniform_int(n));
        char32_t c = detail::random_letter(rng);
        if (c == cps[p]) c = U'a' + (c - U'a' + 1) % 26;
        cps[p] = c;
        break;
      }
    }
    word = utf8::encode(cps);
  }
  return seg.str();
}

// ---------------------------------------------------------------------------
// Word level

enum class WordEdit { kSwap, kDelete, kSpellError };

inline std::string augment_word(std::string_view text, WordEdit kind,
                                double rate, RngStream& rng,
                                const Lexicons& lex = Lexicons::bundled()) {
  auto seg = detail::Segmented::of(text);
  const std::size_t n = seg.words.size();
  switch (kind) {
    case WordEdit::kSwap: {
      // Adjacent pairs; a swapped word is not reconsidered at i + 1.
      std::size_t i = 0;
      while (i + 1 < n) {
        if (rng.uniform() < rate) {
          std::swap(seg.words[i], seg.words[i + 1]);
          i += 2;
        } else {
          ++i;
        }
      }
      return seg.str();
    }
    case WordEdit::kDelete: {
      if (n <= 1) return std::string(text);
      std::vector<bool> keep(n, true);
      std::size_t kept = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (rng.uniform() < rate) {
          keep[i] = false;
          --kept;
        }
      }
      if (kept == n) return std::string(text);
      if (kept == 0) keep[rng.uniform_int(n)] = true;
      std::string out = seg.seps[0];
      bool first = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (!keep[i]) continue;
        if (!first) out += seg.seps[i];
        out += seg.words[i];
        first = false;
      }
      out += seg.seps[n];
      return out;
    }
    case WordEdit::kSpellError: {
      for (auto& word : seg.words) {
        if (!(rng.uniform() < rate)) continue;
        const auto parts = detail::WordParts::of(word);
        auto it = lex.misspellings.find(parts.lower_core());
        if (it == lex.misspellings.end()) continue;
        word = parts.with_core(it->second[rng.uniform_int(it->second.size())]);
      }
      return seg.str();
    }
  }
  return std::string(text);
}

// ---------------------------------------------------------------------------
// Contextual level

enum class ContextualKind {
  kLmInsert,
  kLmSubstitute,
  kEmbedInsert,
  kEmbedSubstitute,
  kBackTranslation
};

struct ContextualOptions {
  std::string pivot_language = "French";
  double temperature = 0.7;
};

struct ContextualResult {
  std::string text;
  bool skipped = false;
  std::optional<std::string> fingerprint;
};

/// Strips a surrounding ``` fence (with optional language tag) and a
/// surrounding pair of quotes.
inline std::string strip_response(std::string_view response) {
  std::string s = trim(response);
  if (s.size() >= 6 && s.rfind("```", 0) == 0 &&
      s.compare(s.size() - 3, 3, "```") == 0) {
    s = s.substr(3, s.size() - 6);
    const auto nl = s.find('\n');
    if (nl != std::string::npos) {
      const std::string tag = trim(std::string_view(s).substr(0, nl));
      if (!tag.empty() && tag.find(' ') == std::string::npos &&
          std::all_of(tag.begin(), tag.end(), [](unsigned char c) {
            return std::isalnum(c) || c == '-' || c == '_';
          })) {
        s = s.substr(nl + 1);
      }
    }
    s = trim(s);
  }
  static const std::pair<std::string_view, std::string_view> kQuotes[] = {
      {"\"", "\""}, {"'", "'"}, {"\xE2\x80\x9C", "\xE2\x80\x9D"}};
  for (const auto& [open, close] : kQuotes) {
    if (s.size() >= open.size() + close.size() && s.rfind(open, 0) == 0 &&
        s.compare(s.size() - close.size(), close.size(), close) == 0) {
      s = trim(std::string_view(s).substr(open.size(),
                                          s.size() - open.size() - close.size()));
      break;
    }
  }
  return s;
}

inline std::string contextual_prompt(ContextualKind kind, std::string_view text,
                                     const ContextualOptions& opts) {
  std::string p;
  switch (kind) {
    case ContextualKind::kLmInsert:
      p = "Insert one contextually plausible word into the text delimited by "
          "triple backticks. Keep every original word in its original order "
          "and return only the modified text.";
      break;
    case ContextualKind::kLmSubstitute:
      p = "Replace one word in the text delimited by triple backticks with a "
          "synonym that fits its context. Return only the modified text.";
      break;
    case ContextualKind::kBackTranslation:
      p = "Translate the text delimited by triple backticks into " +
          opts.pivot_language +
          ", then translate that translation back into English. Return only "
          "the final English text.";
      break;
    default:
      throw Error(ErrorCode::kInvalidArgument,
                  "embedding kinds do not use a prompt");
  }
  p += "\nInput Data: ```";
  p.append(text);
  p += "```";
  return p;
}

namespace detail {

inline std::string lexicon_edit(std::string_view text, bool insert,
                                double rate, RngStream& rng,
                                const Lexicons& lex) {
  auto seg = Segmented::of(text);
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < seg.words.size(); ++i) {
    if (lex.synonyms.count(WordParts::of(seg.words[i]).lower_core())) {
      candidates.push_back(i);
    }
  }
  if (candidates.empty()) return std::string(text);
  const auto wanted = static_cast<std::size_t>(std::llround(
      rate * static_cast<double>(seg.words.size())));
  const std::size_t count =
      std::clamp<std::size_t>(wanted, 1, candidates.size());
  auto picks = rng.sample_indices(candidates.size(), count);
  std::sort(picks.begin(), picks.end());
  for (auto p : picks) {
    auto& word = seg.words[candidates[p]];
    const auto parts = WordParts::of(word);
    // The first listed synonym is the nearest neighbour.
    const std::string& nearest = lex.synonyms.at(parts.lower_core()).front();
    if (insert) {
      word += " " + nearest;
    } else {
      word = parts.with_core(nearest);
    }
  }
  return seg.str();
}

}  // namespace detail

/// embed_* kinds are lexicon lookups and never touch the backend. The lm_*
/// kinds and back_translation send one prompt; a blank reply returns the
/// original text with skipped = true.
inline ContextualResult augment_contextual(
    std::string_view text, ContextualKind kind, LlmClient* client,
    RngStream& rng, double rate = 0.1,
    const Lexicons& lex = Lexicons::bundled(),
    const ContextualOptions& opts = {}) {
  if (kind == ContextualKind::kEmbedInsert ||
      kind == ContextualKind::kEmbedSubstitute) {
    return {detail::lexicon_edit(text, kind == ContextualKind::kEmbedInsert,
                                 rate, rng, lex),
            false, std::nullopt};
  }
  if (client == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                "contextual augmentation needs a language-model backend");
  }
  auto req = user_request(client->config().model,
                          contextual_prompt(kind, text, opts), opts.temperature);
  const std::string reply = strip_response(client->chat_complete(req));
  if (reply.empty()) return {std::string(text), true, client->fingerprint(req)};
  return {reply, false, client->fingerprint(req)};
}

// ---------------------------------------------------------------------------
// Instruction-driven augmentation

inline constexpr std::string_view kAugmentationPreamble =
    "Please do the following data augmentation steps to the text delimited "
    "by triple backticks. If you need any external resources or data, you "
    "can just simulate the environment by yourself and finish that step "
    "based on your own knowledge since you are the best language model in "
    "word.";

inline std::string augmentation_prompt(const Instruction& ins,
                                       std::string_view input) {
  std::string p(kAugmentationPreamble);
  p += " Augmentation Instructions: ";
  p += render_instruction(ins);
  p += ", Input Data: ```";
  p.append(input);
  p += "```";
  return p;
}

inline bool looks_like_refusal(std::string_view response) {
  std::string lower;
  for (char32_t cp : utf8::decode(response)) {
    if (cp == 0x2019) cp = U'\'';
    utf8::append(lower, utf8::to_lower(cp));
  }
  static constexpr std::string_view kPatterns[] = {"i cannot", "i'm sorry",
                                                   "as an ai"};
  for (auto p : kPatterns) {
    if (lower.find(p) != std::string::npos) return true;
  }
  return false;
}

struct LlmAugmentOptions {
  double temperature = 0.7;
  std::optional<std::uint64_t> request_seed;
};

/// One chat call per example. Refusals and blank replies keep the original
/// input and are flagged on the record.
inline AugmentationRecord llm_augment(const Instruction& ins, const Example& ex,
                                      LlmClient& client,
                                      const std::string& task_name = {},
                                      std::uint64_t seed = 0,
                                      const LlmAugmentOptions& opts = {}) {
  auto req = user_request(client.config().model,
                          augmentation_prompt(ins, ex.input), opts.temperature);
  req.seed = opts.request_seed;
  AugmentationRecord rec;
  rec.task_name = task_name;
  rec.method_id = ins.name;
  rec.original = ex;
  rec.seed = seed;
  rec.backend_fingerprint = client.fingerprint(req);
  const std::string reply = strip_response(client.chat_complete(req));
  if (reply.empty()) {
    rec.augmented_input = ex.input;
    rec.flags.push_back("empty_response");
  } else if (looks_like_refusal(reply)) {
    rec.augmented_input = ex.input;
    rec.flags.push_back("refusal");
  } else {
    rec.augmented_input = reply;
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Dataset level

struct ApplyOptions {
  const Lexicons* lexicons = nullptr;  // bundled tables when null
  ContextualOptions contextual;
  double llm_temperature = 0.7;
};

/// Exactly `repetitions` records per training example, in input order.
/// Per-example failures become flagged records that keep the original input;
/// the call throws only when every example failed.
inline std::vector<AugmentationRecord> apply_to_dataset(
    const AugmenterSpec& spec, const TaskDataset& task,
    LlmClient* client = nullptr, const ApplyOptions& opts = {}) {
  spec.validate();
  if (task.train.empty()) {
    throw Error(ErrorCode::kInsufficientExamples,
                task.task_name + ": no training examples to augment");
  }
  if (spec.uses_backend() && client == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                "method '" + spec.method_id() + "' needs a backend");
  }
  const Lexicons& lex = opts.lexicons ? *opts.lexicons : Lexicons::bundled();
  const auto reps = static_cast<std::size_t>(spec.repetitions);
  const std::size_t total = task.train.size() * reps;
  std::vector<AugmentationRecord> out(total);
  std::vector<std::string> errors(total);

  auto run_one = [&](std::size_t slot) {
    const Example& ex = task.train[slot / reps];
    const std::uint64_t item_seed = derive_seed(spec.seed, slot);
    AugmentationRecord rec;
    rec.task_name = task.task_name;
    rec.method_id = spec.method_id();
    rec.original = ex;
    rec.seed = item_seed;
    try {
      if (const auto* ins = std::get_if<Instruction>(&spec.method)) {
        LlmAugmentOptions lo{opts.llm_temperature, std::nullopt};
        if (slot % reps != 0) lo.request_seed = item_seed;
        rec = llm_augment(*ins, ex, *client, task.task_name, item_seed, lo);
      } else {
        RngStream rng(item_seed);
        const auto m = std::get<NonLlmMethod>(spec.method);
        switch (m) {
          case NonLlmMethod::kCharSwap:
            rec.augmented_input = augment_char(ex.input, CharEdit::kSwap, spec.rate, rng, lex);
            break;
          case NonLlmMethod::kCharOcr:
            rec.augmented_input = augment_char(ex.input, CharEdit::kOcr, spec.rate, rng, lex);
            break;
          case NonLlmMethod::kCharDelete:
            rec.augmented_input = augment_char(ex.input, CharEdit::kDelete, spec.rate, rng, lex);
            break;
          case NonLlmMethod::kCharInsert:
            rec.augmented_input = augment_char(ex.input, CharEdit::kInsert, spec.rate, rng, lex);
            break;
          case NonLlmMethod::kCharSubstitute:
            rec.augmented_input = augment_char(ex.input, CharEdit::kSubstitute, spec.rate, rng, lex);
            break;
          case NonLlmMethod::kWordSwap:
            rec.augmented_input = augment_word(ex.input, WordEdit::kSwap, spec.rate, rng, lex);
            break;
          case NonLlmMethod::kWordDelete:
            rec.augmented_input = augment_word(ex.input, WordEdit::kDelete, spec.rate, rng, lex);
            break;
          case NonLlmMethod::kSpellError:
            rec.augmented_input = augment_word(ex.input, WordEdit::kSpellError, spec.rate, rng, lex);
            break;
          default: {
            ContextualKind kind = ContextualKind::kLmInsert;
            if (m == NonLlmMethod::kLmSubstitute) kind = ContextualKind::kLmSubstitute;
            if (m == NonLlmMethod::kEmbedInsert) kind = ContextualKind::kEmbedInsert;
            if (m == NonLlmMethod::kEmbedSubstitute) kind = ContextualKind::kEmbedSubstitute;
            if (m == NonLlmMethod::kBackTranslation) kind = ContextualKind::kBackTranslation;
            auto res = augment_contextual(ex.input, kind, client, rng, spec.rate,
                                          lex, opts.contextual);
            rec.augmented_input = std::move(res.text);
            rec.backend_fingerprint = std::move(res.fingerprint);
            if (res.skipped) rec.flags.push_back("skipped_empty_response");
            break;
          }
        }
      }
      rec.seed = item_seed;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kBudget) throw;
      errors[slot] = e.what();
      rec.augmented_input = ex.input;
      rec.flags.push_back(std::string("error: ") + e.what());
    } catch (const std::exception& e) {
      errors[slot] = e.what();
      rec.augmented_input = ex.input;
      rec.flags.push_back(std::string("error: ") + e.what());
    }
    out[slot] = std::move(rec);
  };

  const std::size_t workers =
      spec.uses_backend() && client
          ? static_cast<std::size_t>(client->config().max_parallel)
          : 1;
  parallel_for(total, workers, run_one);

  const auto failed = static_cast<std::size_t>(std::count_if(
      errors.begin(), errors.end(), [](const auto& e) { return !e.empty(); }));
  if (failed == total) {
    throw Error(ErrorCode::kAllExamplesFailed,
                task.task_name + "/" + spec.method_id() + ": " + errors.front());
  }
  return out;
}

}  // namespace augmenta

#endif  // AUGMENTA_AUGMENTERS_HPP_
