/*
 * Copyright 2026 The kgstega Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Keyed branch-flip bits. Part of the wire format: both sides must derive the
// same bit for the same (secret, codebook owner, internal tree node).
//
//   flip = HMAC-SHA256(secret, tag || be64(owner) || be32(internal_index))[0] & 1
//
// with tag "kgstega/edge/v1" for per-node edge codebooks (owner = node id) and
// "kgstega/start/v1" for the level-1 start codebook (owner = 0).

#include <sodium.h>

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "kgstega/error.hpp"

namespace kgstega {

inline constexpr std::string_view kEdgeFlipTag = "kgstega/edge/v1";
inline constexpr std::string_view kStartFlipTag = "kgstega/start/v1";

class FlipPrf {
 public:
  explicit FlipPrf(std::string_view secret) {
    if (sodium_init() < 0) throw Error(ErrorCode::InvalidKey, "libsodium failed to initialise");
    crypto_auth_hmacsha256_init(&base_, reinterpret_cast<const unsigned char*>(secret.data()),
                                secret.size());
  }

  bool bit(std::string_view tag, std::int64_t owner, std::uint32_t internal_index) const {
    std::array<unsigned char, 12> suffix{};
    const auto u = static_cast<std::uint64_t>(owner);
    for (int i = 0; i < 8; ++i) suffix[i] = static_cast<unsigned char>(u >> (56 - 8 * i));
    for (int i = 0; i < 4; ++i)
      suffix[8 + i] = static_cast<unsigned char>(internal_index >> (24 - 8 * i));
    auto state = base_;
    crypto_auth_hmacsha256_update(&state, reinterpret_cast<const unsigned char*>(tag.data()),
                                  tag.size());
    crypto_auth_hmacsha256_update(&state, suffix.data(), suffix.size());
    std::array<unsigned char, crypto_auth_hmacsha256_BYTES> mac{};
    crypto_auth_hmacsha256_final(&state, mac.data());
    return mac[0] & 1;
  }

 private:
  crypto_auth_hmacsha256_state base_{};
};

}  // namespace kgstega
