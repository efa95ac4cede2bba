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

// Deterministic text primitives shared by every other module: the canonical
// tokenizer, LCS / ROUGE-L, a portable counter-based random stream and signed
// feature hashing.

#ifndef AUGMENTA_TEXTCORE_HPP_
#define AUGMENTA_TEXTCORE_HPP_

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace augmenta {

using TokenSeq = std::vector<std::string>;

namespace utf8 {

/// Decodes UTF-8 into code points. Invalid bytes decode to U+FFFD one byte
/// at a time so the function never throws.
inline std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int extra = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      extra = 1;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      extra = 2;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      extra = 3;
      cp = b0 & 0x07;
    } else {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      if (i + k >= s.size()) {
        ok = false;
        break;
      }
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(extra) + 1;
  }
  return out;
}

inline void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) append(out, cp);
  return out;
}

inline bool is_space(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Simple case folding: ASCII, Latin-1, Latin Extended-A pairs, Greek and
// Cyrillic capitals. Anything else passes through unchanged.
inline char32_t to_lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  if (cp < 0xC0) return cp;
  if (cp <= 0xDE && cp != 0xD7) return cp + 32;
  if (cp >= 0x100 && cp <= 0x17F && cp != 0x130 && cp != 0x131 &&
      cp != 0x138 && cp != 0x149 && cp != 0x17F) {
    const bool odd_lower = (cp >= 0x139 && cp <= 0x148) ||
                           (cp >= 0x179 && cp <= 0x17E);
    if (odd_lower) return (cp % 2 == 1) ? cp + 1 : cp;
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 32;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 32;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 80;
  return cp;
}

}  // namespace utf8

/// Lowercases and splits on runs of unicode whitespace. Punctuation stays
/// attached to the neighbouring word.
inline TokenSeq tokenize(std::string_view text) {
  TokenSeq tokens;
  std::string current;
  for (char32_t cp : utf8::decode(text)) {
    if (utf8::is_space(cp)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      utf8::append(current, utf8::to_lower(cp));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

inline std::string join(std::span<const std::string> parts,
                        std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

inline std::string trim(std::string_view s) {
  const auto cps = utf8::decode(s);
  std::size_t b = 0;
  std::size_t e = cps.size();
  while (b < e && utf8::is_space(cps[b])) ++b;
  while (e > b && utf8::is_space(cps[e - 1])) --e;
  return utf8::encode(std::u32string_view(cps).substr(b, e - b));
}

/// Classic O(|a|*|b|) dynamic program with a rolling row.
inline std::size_t lcs_length(std::span<const std::string> a,
                              std::span<const std::string> b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

/// ROUGE-L F-measure. R = L/|reference|, P = L/|candidate|,
/// F = (1 + beta^2) R P / (R + beta^2 P). Zero for empty inputs or L = 0.
inline double rouge_l(std::span<const std::string> candidate,
                      std::span<const std::string> reference,
                      double beta = 1.0) {
  if (candidate.empty() || reference.empty()) return 0.0;
  const auto l = static_cast<double>(lcs_length(candidate, reference));
  if (l == 0.0) return 0.0;
  const double recall = l / static_cast<double>(reference.size());
  const double precision = l / static_cast<double>(candidate.size());
  const double b2 = beta * beta;
  return (1.0 + b2) * recall * precision / (recall + b2 * precision);
}

inline double rouge_l(std::string_view candidate, std::string_view reference,
                      double beta = 1.0) {
  return rouge_l(tokenize(candidate), tokenize(reference), beta);
}

// SplitMix64 finalizer (Steele, Lea & Flood), constants
// 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based SplitMix64 stream. The value at position p is
/// mix64(seed + (p + 1) * 0x9E3779B97F4A7C15), so a (seed, position) pair
/// fully determines every future draw on any platform.
class RngStream {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit RngStream(std::uint64_t seed, std::uint64_t position = 0)
      : seed_(seed), position_(position) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t position() const noexcept { return position_; }

  std::uint64_t next_u64() noexcept {
    ++position_;
    return mix64(seed_ + position_ * kGamma);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n) by rejection; n must be > 0.
  std::uint64_t uniform_int(std::uint64_t n) noexcept {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& v) noexcept {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// k distinct indices from [0, n) via a partial Fisher-Yates, in draw
  /// order. Requires k <= n.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::size_t>(uniform_int(n - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t position_;
};

/// Independent child seed for worker / item `stream_id`.
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::uint64_t stream_id) noexcept {
  return mix64(seed ^ mix64(stream_id + 0x632BE59BD9B4E019ULL));
}

// FNV-1a 64: offset basis 0xcbf29ce484222325, prime 0x100000001b3.
constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Sorted (index, value) pairs; zero entries are not stored.
struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> entries;

  double at(std::uint32_t index) const {
    auto it = std::lower_bound(
        entries.begin(), entries.end(), index,
        [](const auto& e, std::uint32_t i) { return e.first < i; });
    return (it != entries.end() && it->first == index) ? it->second : 0.0;
  }

  bool empty() const { return entries.empty(); }

  std::vector<double> to_dense(std::uint32_t dim) const {
    std::vector<double> out(dim, 0.0);
    for (const auto& [i, v] : entries) out[i] = v;
    return out;
  }
};

/// Bucket and sign for one feature string: bucket = h mod dim, sign is
/// negative when bit 63 of h is set.
inline std::pair<std::uint32_t, double> hash_bucket(std::string_view feature,
                                                    std::uint32_t dim) {
  const std::uint64_t h = fnv1a64(feature);
  return {static_cast<std::uint32_t>(h % dim), (h >> 63) ? -1.0 : 1.0};
}

/// Signed counts of every 1..n_gram_max token n-gram (tokens joined by a
/// single space) hashed into `dim` buckets.
inline SparseVector hash_features(std::span<const std::string> tokens,
                                  int n_gram_max, std::uint32_t dim) {
  std::vector<std::pair<std::uint32_t, double>> raw;
  std::string gram;
  for (int n = 1; n <= n_gram_max; ++n) {
    const auto width = static_cast<std::size_t>(n);
    if (tokens.size() < width) break;
    for (std::size_t i = 0; i + width <= tokens.size(); ++i) {
      gram.clear();
      for (std::size_t k = 0; k < width; ++k) {
        if (k) gram.push_back(' ');
        gram.append(tokens[i + k]);
      }
      raw.push_back(hash_bucket(gram, dim));
    }
  }
  std::sort(raw.begin(), raw.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  SparseVector out;
  for (const auto& [i, v] : raw) {
    if (!out.entries.empty() && out.entries.back().first == i) {
      out.entries.back().second += v;
    } else {
      out.entries.emplace_back(i, v);
    }
  }
  std::erase_if(out.entries, [](const auto& e) { return e.second == 0.0; });
  return out;
}

}  // namespace augmenta

#endif  // AUGMENTA_TEXTCORE_HPP_
