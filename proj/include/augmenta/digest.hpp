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

#ifndef AUGMENTA_DIGEST_HPP_
#define AUGMENTA_DIGEST_HPP_

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "augmenta/error.hpp"

namespace augmenta {

inline std::array<unsigned char, 32> sha256(std::string_view data) {
  std::array<unsigned char, 32> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(),
                 nullptr) != 1 ||
      len != md.size()) {
    throw Error(ErrorCode::kInvalidArgument, "SHA-256 failed");
  }
  return md;
}

inline std::string sha256_hex(std::string_view data) {
  static constexpr char kHex[] = "0123456789abcdef";
  const auto md = sha256(data);
  std::string out;
  out.reserve(64);
  for (unsigned char b : md) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xF]);
  }
  return out;
}

/// First 8 digest bytes, big-endian. Used to seed per-request randomness.
inline std::uint64_t sha256_u64(std::string_view data) {
  const auto md = sha256(data);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | md[static_cast<std::size_t>(i)];
  return v;
}

inline std::string base64_encode(const unsigned char* data, std::size_t n) {
  std::string out(4 * ((n + 2) / 3), '\0');
  const int written = EVP_EncodeBlock(
      reinterpret_cast<unsigned char*>(out.data()), data, static_cast<int>(n));
  out.resize(static_cast<std::size_t>(written));
  return out;
}

inline std::vector<unsigned char> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) {
    throw Error(ErrorCode::kMalformedRecord, "base64 length not a multiple of 4");
  }
  std::vector<unsigned char> out(3 * text.size() / 4);
  const int n = EVP_DecodeBlock(
      out.data(), reinterpret_cast<const unsigned char*>(text.data()),
      static_cast<int>(text.size()));
  if (n < 0) throw Error(ErrorCode::kMalformedRecord, "invalid base64");
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

}  // namespace augmenta

#endif  // AUGMENTA_DIGEST_HPP_
