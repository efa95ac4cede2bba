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

// Language-model access. An LlmClient owns the response cache, the usage
// ledger and the in-flight limit, and delegates the actual generation to a
// LanguageModel: either OpenAiModel (OpenAI-compatible HTTP) or MockModel
// (deterministic, offline).
//
// Wire format: POST {base_url}/chat/completions with
// {"model","messages","temperature","max_tokens"}; the answer is read from
// choices[0].message.content. Candidate log-probabilities use the legacy
// {base_url}/completions endpoint with echo=true.
//
// Cache layout: {cache_dir}/{key[0:2]}/{key}.json holding
// {"request","response","timestamp"}, where key is the SHA-256 of the
// canonical (sorted-key) JSON request.

#ifndef AUGMENTA_BACKENDS_HPP_
#define AUGMENTA_BACKENDS_HPP_

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "augmenta/datamodel.hpp"
#include "augmenta/digest.hpp"
#include "augmenta/error.hpp"
#include "augmenta/textcore.hpp"
#include "httplib.h"
#include "json.hpp"

namespace augmenta {

enum class Role { kSystem, kUser, kAssistant };

inline std::string_view role_name(Role r) {
  switch (r) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "user";
}

struct ChatMessage {
  Role role = Role::kUser;
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.7;
  std::optional<int> max_tokens;
  // Sent as "seed" only when set; distinguishes repeated augmentations of
  // the same text.
  std::optional<std::uint64_t> seed;
};

inline ChatRequest user_request(std::string model, std::string content,
                                double temperature = 0.7) {
  ChatRequest req;
  req.model = std::move(model);
  req.messages.push_back({Role::kUser, std::move(content)});
  req.temperature = temperature;
  return req;
}

inline void validate_request(const ChatRequest& req) {
  if (req.messages.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "chat request has no messages");
  }
  if (req.messages.front().role == Role::kAssistant) {
    throw Error(ErrorCode::kInvalidArgument,
                "first message must be a system or user message");
  }
  if (!(req.temperature >= 0.0) || !std::isfinite(req.temperature)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be >= 0");
  }
  if (req.max_tokens && *req.max_tokens <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_tokens must be positive");
  }
}

inline json request_to_json(const ChatRequest& req) {
  json body;
  body["model"] = req.model;
  body["messages"] = json::array();
  for (const auto& m : req.messages) {
    body["messages"].push_back(
        {{"role", std::string(role_name(m.role))}, {"content", m.content}});
  }
  body["temperature"] = req.temperature;
  if (req.max_tokens) body["max_tokens"] = *req.max_tokens;
  if (req.seed) body["seed"] = *req.seed;
  return body;
}

/// nlohmann::json keeps object keys sorted, so dumping a parsed value is a
/// canonical form: key order in the source text never matters.
inline std::string canonical_json(const json& value) { return value.dump(); }

inline std::string cache_key(const json& request) {
  return sha256_hex(canonical_json(request));
}

inline std::string cache_key(const ChatRequest& req) {
  return cache_key(request_to_json(req));
}

inline std::string last_user_message(const ChatRequest& req) {
  for (auto it = req.messages.rbegin(); it != req.messages.rend(); ++it) {
    if (it->role == Role::kUser) return it->content;
  }
  return {};
}

struct BackendConfig {
  std::string kind = "openai";  // "openai" | "mock"
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key;
  std::string model = "gpt-3.5-turbo";
  std::chrono::milliseconds timeout{60000};
  int max_retries = 3;
  int max_parallel = 4;
  fs::path cache_dir;  // empty disables caching
  std::uint64_t budget_tokens = 0;  // 0 = unlimited
  std::chrono::milliseconds backoff_base{500};
  std::uint64_t jitter_seed = 0x5eed;
  fs::path mock_script;  // optional, mock kind only

  /// Secrets come from the environment only.
  void apply_env() {
    if (const char* key = std::getenv("AUGMENTA_API_KEY")) api_key = key;
    if (const char* url = std::getenv("AUGMENTA_BASE_URL")) base_url = url;
  }

  void validate() const {
    if (max_parallel < 1) {
      throw Error(ErrorCode::kConfig, "max_parallel must be >= 1");
    }
    if (max_retries < 0) {
      throw Error(ErrorCode::kConfig, "max_retries must be >= 0");
    }
    if (kind != "mock" && kind != "openai") {
      throw Error(ErrorCode::kConfig, "unknown backend kind '" + kind + "'");
    }
    if (kind == "openai" && api_key.empty()) {
      throw Error(ErrorCode::kConfig,
                  "backend 'openai' needs an API key; set AUGMENTA_API_KEY "
                  "or use the mock backend");
    }
  }
};

struct UsageSnapshot {
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
  std::uint64_t request_count = 0;  // network attempts, retries included
  std::uint64_t cache_hits = 0;
  std::uint64_t mock_responses = 0;

  std::uint64_t total_tokens() const { return prompt_tokens + completion_tokens; }
};

class UsageLedger {
 public:
  void add_tokens(std::uint64_t prompt, std::uint64_t completion) {
    prompt_tokens_ += prompt;
    completion_tokens_ += completion;
  }
  void add_request() { ++request_count_; }
  void add_cache_hit() { ++cache_hits_; }
  void add_mock_response() { ++mock_responses_; }

  std::uint64_t total_tokens() const {
    return prompt_tokens_.load() + completion_tokens_.load();
  }
  std::uint64_t request_count() const { return request_count_.load(); }

  UsageSnapshot snapshot() const {
    return {prompt_tokens_.load(), completion_tokens_.load(),
            request_count_.load(), cache_hits_.load(), mock_responses_.load()};
  }

 private:
  std::atomic<std::uint64_t> prompt_tokens_{0};
  std::atomic<std::uint64_t> completion_tokens_{0};
  std::atomic<std::uint64_t> request_count_{0};
  std::atomic<std::uint64_t> cache_hits_{0};
  std::atomic<std::uint64_t> mock_responses_{0};
};

// Approximate token count when the server reports no usage.
inline std::uint64_t estimate_tokens(std::string_view text) {
  return (text.size() + 3) / 4;
}

/// Write-once content-addressed store. Concurrent readers are fine; a writer
/// goes through a unique temp file and rename, and never replaces an entry.
class ResponseCache {
 public:
  explicit ResponseCache(fs::path dir) : dir_(std::move(dir)) {}

  fs::path path_for(const std::string& key) const {
    return dir_ / key.substr(0, 2) / (key + ".json");
  }

  std::optional<json> get(const std::string& key) const {
    const auto path = path_for(key);
    if (!fs::exists(path)) return std::nullopt;
    try {
      auto doc = json::parse(detail::read_file(path));
      if (!doc.contains("response")) return std::nullopt;
      return doc["response"];
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  void put(const std::string& key, const json& request, const json& response) {
    const auto path = path_for(key);
    if (fs::exists(path)) return;
    json doc;
    doc["request"] = request;
    doc["response"] = response;
    doc["timestamp"] = utc_timestamp();
    fs::create_directories(path.parent_path());
    static std::atomic<std::uint64_t> counter{0};
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(counter.fetch_add(1)) + "." +
           std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
      out << doc.dump(2) << '\n';
    }
    std::error_code ec;
    if (fs::exists(path)) {
      fs::remove(tmp, ec);
      return;
    }
    fs::rename(tmp, path, ec);
    if (ec) fs::remove(tmp, ec);
  }

 private:
  static std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }

  fs::path dir_;
};

/// A generation provider. Implementations account their own network usage
/// in the ledger they are handed.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;
  virtual std::string complete(const ChatRequest& req, UsageLedger& ledger) = 0;
  /// Sum over candidate tokens of log P(token | context, earlier tokens).
  virtual double candidate_logprob(const std::string& model,
                                   std::string_view context,
                                   std::string_view candidate,
                                   UsageLedger& ledger) = 0;
  virtual bool is_network() const = 0;
};

// ---------------------------------------------------------------------------
// Mock

/// Substring rules over the last user message. A rule's responses are served
/// in sequence; the last one repeats once the list is exhausted.
class MockScript {
 public:
  struct Rule {
    std::string pattern;
    std::vector<std::string> responses;
  };

  MockScript() = default;
  explicit MockScript(std::vector<Rule> rules)
      : rules_(std::move(rules)), cursors_(rules_.size(), 0) {}

  /// {"rules":[{"pattern":"...","response":"..."} or {"pattern","responses":[...]}]}
  static std::shared_ptr<MockScript> load(const fs::path& path) {
    return std::make_shared<MockScript>(load_rules(path));
  }

  static std::vector<Rule> load_rules(const fs::path& path) {
    json doc;
    try {
      doc = json::parse(detail::read_file(path));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kConfig, path.string() + ": " + e.what());
    }
    std::vector<Rule> rules;
    for (const auto& r : doc.at("rules")) {
      Rule rule;
      rule.pattern = r.at("pattern").get<std::string>();
      if (r.contains("responses")) {
        rule.responses = r["responses"].get<std::vector<std::string>>();
      } else {
        rule.responses.push_back(r.at("response").get<std::string>());
      }
      rules.push_back(std::move(rule));
    }
    return rules;
  }

  void add_rule(std::string pattern, std::vector<std::string> responses) {
    std::lock_guard<std::mutex> lock(mu_);
    rules_.push_back({std::move(pattern), std::move(responses)});
    cursors_.push_back(0);
  }

  std::optional<std::string> match(std::string_view message) {
    std::lock_guard<std::mutex> lock(mu_);
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      if (rules_[i].responses.empty()) continue;
      if (message.find(rules_[i].pattern) == std::string_view::npos) continue;
      const std::size_t c =
          std::min(cursors_[i], rules_[i].responses.size() - 1);
      ++cursors_[i];
      return rules_[i].responses[c];
    }
    return std::nullopt;
  }

 private:
  std::mutex mu_;
  std::vector<Rule> rules_;
  std::vector<std::size_t> cursors_;
};

namespace mock {

inline constexpr std::string_view kGenerationMarker =
    "Come up with a series of textual data augmentation methods";

inline const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> kWords = {
      "alter", "adjacent", "balance", "blend", "boundary", "capture",
      "clause", "context", "convert", "corpus", "cue", "detail", "dialect",
      "diverse", "domain", "echo", "emphasis", "entity", "expand", "fluency",
      "focus", "fragment", "frame", "gentle", "grammar", "hedge", "idiom",
      "imply", "insert", "inversion", "keyword", "layer", "lexical", "marker",
      "meaning", "merge", "modifier", "narrative", "neutral", "nuance",
      "order", "passive", "pattern", "perspective", "phrase", "pivot",
      "polarity", "prefix", "pronoun", "question", "quote", "recast",
      "register", "relation", "reorder", "rhythm", "scope", "segment",
      "shift", "signal", "simplify", "slot", "span", "stance", "structure",
      "style", "subject", "suffix", "summary", "surface", "swap", "syntax",
      "temporal", "tense", "theme", "token", "tone", "topic", "transfer",
      "translate", "variant", "verb", "voice", "weight", "wording", "zone"};
  return kWords;
}

inline const std::vector<std::string>& name_heads() {
  static const std::vector<std::string> kHeads = {
      "Clause", "Context", "Tone", "Voice", "Phrase", "Syntax", "Entity",
      "Register", "Stance", "Segment", "Lexical", "Temporal", "Rhythm",
      "Pronoun", "Keyword", "Modifier"};
  return kHeads;
}

inline const std::vector<std::string>& name_tails() {
  static const std::vector<std::string> kTails = {
      "Shift", "Blend", "Recast", "Swap", "Inversion", "Expansion", "Pivot",
      "Merge", "Transfer", "Variation", "Reorder", "Rewrite"};
  return kTails;
}

inline std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::string cur;
  for (char32_t cp : utf8::decode(text)) {
    if (utf8::is_space(cp)) {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    } else {
      utf8::append(cur, cp);
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

/// Word permutation keyed by `seed`. For two or more words that are not all
/// equal the result always differs from the input.
inline std::string shuffle_words(std::string_view text, std::uint64_t seed) {
  auto words = split_words(text);
  const auto original = words;
  RngStream rng(seed);
  rng.shuffle(words);
  if (words == original && words.size() > 1) {
    std::rotate(words.begin(), words.begin() + 1, words.end());
  }
  return join(words, " ");
}

inline std::optional<std::string> fenced_text(std::string_view message) {
  const auto open = message.find("```");
  if (open == std::string_view::npos) return std::nullopt;
  const auto close = message.find("```", open + 3);
  if (close == std::string_view::npos) return std::nullopt;
  return std::string(message.substr(open + 3, close - open - 3));
}

inline std::string pseudo_instructions(std::uint64_t seed, int count = 10) {
  RngStream rng(seed);
  const auto& vocab = vocabulary();
  std::string out;
  for (int i = 0; i < count; ++i) {
    const auto& head = name_heads()[rng.uniform_int(name_heads().size())];
    const auto& tail = name_tails()[rng.uniform_int(name_tails().size())];
    const auto len = 10 + rng.uniform_int(6);
    std::vector<std::string> body;
    for (std::uint64_t w = 0; w < len; ++w) {
      body.push_back(vocab[rng.uniform_int(vocab.size())]);
    }
    out += std::to_string(i + 1) + ". " + head + " " + tail + ": " +
           join(body, " ") + ".\n";
  }
  return out;
}

inline std::string pseudo_response(std::uint64_t seed) {
  RngStream rng(seed);
  std::vector<std::string> words;
  for (int i = 0; i < 8; ++i) {
    words.push_back(vocabulary()[rng.uniform_int(vocabulary().size())]);
  }
  return join(words, " ");
}

}  // namespace mock

/// Offline backend. Resolution order for a request:
///   1. a scripted rule whose pattern occurs in the last user message;
///   2. a ```fenced``` span in the message: its words, shuffled with a seed
///      taken from SHA-256 of the canonical request;
///   3. an instruction-generation prompt: ten "N. Name: body" lines;
///   4. otherwise eight vocabulary words chosen by the request hash.
class MockModel : public LanguageModel {
 public:
  MockModel() = default;
  explicit MockModel(std::shared_ptr<MockScript> script)
      : script_(std::move(script)) {}

  std::string complete(const ChatRequest& req, UsageLedger& ledger) override {
    validate_request(req);
    ledger.add_mock_response();
    const std::string message = last_user_message(req);
    if (script_) {
      if (auto scripted = script_->match(message)) return *scripted;
    }
    const std::uint64_t seed =
        sha256_u64(canonical_json(request_to_json(req)));
    if (auto fenced = mock::fenced_text(message)) {
      return mock::shuffle_words(*fenced, seed);
    }
    if (message.find(mock::kGenerationMarker) != std::string::npos) {
      return mock::pseudo_instructions(seed);
    }
    return mock::pseudo_response(seed);
  }

  double candidate_logprob(const std::string& model, std::string_view context,
                           std::string_view candidate,
                           UsageLedger& ledger) override {
    ledger.add_mock_response();
    std::string key = model;
    key += '\x1f';
    key.append(context);
    key += '\x1f';
    key.append(candidate);
    const double u =
        static_cast<double>(sha256_u64(key) >> 11) * 0x1.0p-53;
    return -10.0 * u;
  }

  bool is_network() const override { return false; }

 private:
  std::shared_ptr<MockScript> script_;
};

// ---------------------------------------------------------------------------
// OpenAI-compatible HTTP

class OpenAiModel : public LanguageModel {
 public:
  explicit OpenAiModel(BackendConfig cfg) : cfg_(std::move(cfg)) {
    split_base_url(cfg_.base_url, origin_, prefix_);
  }

  std::string complete(const ChatRequest& req, UsageLedger& ledger) override {
    validate_request(req);
    const json body = request_to_json(req);
    const json resp = post_with_retries("/chat/completions", body, ledger);
    std::string content;
    try {
      content = resp.at("choices").at(0).at("message").at("content")
                    .get<std::string>();
    } catch (const json::exception&) {
      throw Error(ErrorCode::kProtocol,
                  "response lacks choices[0].message.content: " +
                      excerpt(resp.dump()));
    }
    account(resp, last_user_message(req), content, ledger);
    return content;
  }

  double candidate_logprob(const std::string& model, std::string_view context,
                           std::string_view candidate,
                           UsageLedger& ledger) override {
    json body;
    body["model"] = model;
    body["prompt"] = std::string(context) + std::string(candidate);
    body["max_tokens"] = 0;
    body["echo"] = true;
    body["logprobs"] = 0;
    body["temperature"] = 0;
    json resp;
    try {
      resp = post_with_retries("/completions", body, ledger);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kProtocol &&
          (last_status_ == 404 || last_status_ == 400)) {
        throw Error(ErrorCode::kUnsupported,
                    "backend does not expose token log-probabilities");
      }
      throw;
    }
    try {
      const auto& lp = resp.at("choices").at(0).at("logprobs");
      const auto& offsets = lp.at("text_offset");
      const auto& values = lp.at("token_logprobs");
      double sum = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].is_null()) continue;
        if (offsets.at(i).get<std::size_t>() < context.size()) continue;
        sum += values[i].get<double>();
      }
      account(resp, body["prompt"].get<std::string>(), "", ledger);
      return sum;
    } catch (const json::exception&) {
      throw Error(ErrorCode::kUnsupported,
                  "response carries no token log-probabilities");
    }
  }

  bool is_network() const override { return true; }

 private:
  static bool transient(int status) {
    return status == 408 || status == 429 || status >= 500;
  }

  static std::string excerpt(std::string_view s) {
    return std::string(s.substr(0, 300));
  }

  static void split_base_url(const std::string& url, std::string& origin,
                             std::string& prefix) {
    const auto scheme = url.find("://");
    const auto path_start =
        url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (path_start == std::string::npos) {
      origin = url;
      prefix.clear();
    } else {
      origin = url.substr(0, path_start);
      prefix = url.substr(path_start);
    }
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  }

  void account(const json& resp, std::string_view prompt,
               std::string_view completion, UsageLedger& ledger) const {
    if (resp.contains("usage") && resp["usage"].is_object()) {
      const auto& u = resp["usage"];
      ledger.add_tokens(u.value("prompt_tokens", std::uint64_t{0}),
                        u.value("completion_tokens", std::uint64_t{0}));
    } else {
      ledger.add_tokens(estimate_tokens(prompt), estimate_tokens(completion));
    }
  }

  std::chrono::milliseconds backoff(int attempt) {
    std::lock_guard<std::mutex> lock(jitter_mu_);
    const auto base = cfg_.backoff_base.count() * (std::int64_t{1} << attempt);
    const auto jitter = static_cast<std::int64_t>(
        jitter_.uniform() * static_cast<double>(base));
    return std::chrono::milliseconds(base + jitter);
  }

  json post_with_retries(const std::string& path, const json& body,
                         UsageLedger& ledger) {
    const std::string payload = body.dump();
    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
      if (cfg_.budget_tokens > 0 &&
          ledger.total_tokens() >= cfg_.budget_tokens) {
        throw Error(ErrorCode::kBudget,
                    "token budget of " + std::to_string(cfg_.budget_tokens) +
                        " exhausted");
      }
      if (attempt > 0) std::this_thread::sleep_for(backoff(attempt - 1));
      httplib::Client client(origin_);
      const auto secs = std::chrono::duration_cast<std::chrono::seconds>(cfg_.timeout);
      const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
          cfg_.timeout - secs);
      client.set_connection_timeout(secs.count(), usecs.count());
      client.set_read_timeout(secs.count(), usecs.count());
      client.set_write_timeout(secs.count(), usecs.count());
      httplib::Headers headers;
      if (!cfg_.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + cfg_.api_key);
      }
      ledger.add_request();
      auto res = client.Post(prefix_ + path, headers, payload, "application/json");
      if (!res) {
        last_error = httplib::to_string(res.error());
        last_status_ = 0;
        continue;
      }
      last_status_ = res->status;
      if (res->status >= 200 && res->status < 300) {
        try {
          return json::parse(res->body);
        } catch (const json::exception&) {
          throw Error(ErrorCode::kProtocol,
                      "status " + std::to_string(res->status) +
                          ", unparsable body: " + excerpt(res->body));
        }
      }
      if (!transient(res->status)) {
        throw Error(ErrorCode::kProtocol,
                    "status " + std::to_string(res->status) + ": " +
                        excerpt(res->body));
      }
      last_error = "status " + std::to_string(res->status) + ": " +
                   excerpt(res->body);
    }
    throw Error(ErrorCode::kTransport,
                "giving up after " + std::to_string(cfg_.max_retries + 1) +
                    " attempts (" + last_error + ")");
  }

  BackendConfig cfg_;
  std::string origin_;
  std::string prefix_;
  std::mutex jitter_mu_;
  RngStream jitter_{cfg_.jitter_seed};
  thread_local static inline int last_status_ = 0;
};

// ---------------------------------------------------------------------------
// Client

class LlmClient {
 public:
  LlmClient(BackendConfig cfg, std::unique_ptr<LanguageModel> model)
      : cfg_(std::move(cfg)),
        model_(std::move(model)),
        in_flight_(std::max(1, cfg_.max_parallel)) {
    if (!cfg_.cache_dir.empty()) cache_.emplace(cfg_.cache_dir);
  }

  const BackendConfig& config() const { return cfg_; }
  const UsageLedger& ledger() const { return ledger_; }
  bool is_network() const { return model_->is_network(); }

  /// Cache hit: no provider call. Miss: one provider call (which may retry
  /// internally), then the response is stored.
  std::string chat_complete(const ChatRequest& req) {
    validate_request(req);
    const json wire = request_to_json(req);
    const std::string key = cache_key(wire);
    if (cache_) {
      if (auto hit = cache_->get(key); hit && hit->is_string()) {
        ledger_.add_cache_hit();
        return hit->get<std::string>();
      }
    }
    std::string content;
    {
      in_flight_.acquire();
      struct Release {
        std::counting_semaphore<>& s;
        ~Release() { s.release(); }
      } release{in_flight_};
      content = model_->complete(req, ledger_);
    }
    if (cache_) cache_->put(key, wire, content);
    return content;
  }

  std::vector<double> candidate_logprobs(std::string_view context,
                                         std::span<const std::string> candidates) {
    if (candidates.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "no candidates to score");
    }
    std::vector<double> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) {
      json wire;
      wire["kind"] = "candidate_logprob";
      wire["model"] = cfg_.model;
      wire["context"] = std::string(context);
      wire["candidate"] = c;
      const std::string key = cache_key(wire);
      if (cache_) {
        if (auto hit = cache_->get(key); hit && hit->is_number()) {
          ledger_.add_cache_hit();
          out.push_back(hit->get<double>());
          continue;
        }
      }
      in_flight_.acquire();
      double v = 0.0;
      try {
        v = model_->candidate_logprob(cfg_.model, context, c, ledger_);
      } catch (...) {
        in_flight_.release();
        throw;
      }
      in_flight_.release();
      if (cache_) cache_->put(key, wire, v);
      out.push_back(v);
    }
    return out;
  }

  /// Model name plus cache key of the request that produced a response.
  std::string fingerprint(const ChatRequest& req) const {
    return req.model + ":" + cache_key(req);
  }

 private:
  BackendConfig cfg_;
  std::unique_ptr<LanguageModel> model_;
  std::optional<ResponseCache> cache_;
  UsageLedger ledger_;
  std::counting_semaphore<> in_flight_;
};

/// Builds the provider named by cfg.kind after validating the config, so a
/// missing API key fails before any work starts.
inline std::unique_ptr<LlmClient> make_client(BackendConfig cfg) {
  cfg.validate();
  std::unique_ptr<LanguageModel> model;
  if (cfg.kind == "mock") {
    std::shared_ptr<MockScript> script;
    if (!cfg.mock_script.empty()) {
      script = MockScript::load(cfg.mock_script);
    }
    model = std::make_unique<MockModel>(std::move(script));
  } else {
    model = std::make_unique<OpenAiModel>(cfg);
  }
  return std::make_unique<LlmClient>(std::move(cfg), std::move(model));
}

}  // namespace augmenta

#endif  // AUGMENTA_BACKENDS_HPP_
