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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgstega/error.hpp"

namespace kgstega {

using Bits = std::vector<bool>;

inline std::string to_string(const Bits& bits) {
  std::string s;
  s.reserve(bits.size());
  for (bool b : bits) s.push_back(b ? '1' : '0');
  return s;
}

inline Bits bits_from_string(std::string_view s) {
  Bits bits;
  for (char c : s) {
    if (c == '0' || c == '1')
      bits.push_back(c == '1');
    else
      throw Error(ErrorCode::InvalidArgument, "bit string may only contain 0 and 1");
  }
  return bits;
}

/// Reads bits MSB-first. Past the end it yields padding zeros and counts
/// them separately, so callers can tell payload from fill.
class BitCursor {
 public:
  explicit BitCursor(const Bits& bits) : bits_(&bits) {}

  bool exhausted() const { return pos_ >= bits_->size(); }
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return exhausted() ? 0 : bits_->size() - pos_; }

  /// Next bit, or a padding zero once the input is used up.
  bool next() {
    if (exhausted()) {
      ++padding_;
      return false;
    }
    return (*bits_)[pos_++];
  }

  std::size_t padding_emitted() const { return padding_; }

 private:
  const Bits* bits_;
  std::size_t pos_ = 0;
  std::size_t padding_ = 0;
};

inline constexpr std::size_t kLengthHeaderBits = 16;
inline constexpr std::size_t kMaxPayloadBits = (std::size_t{1} << kLengthHeaderBits) - 1;

/// The secret bitstream. Bytes map to bits MSB-first.
class Payload {
 public:
  Payload() = default;

  explicit Payload(Bits bits) : bits_(std::move(bits)) {
    if (bits_.size() > kMaxPayloadBits)
      throw Error(ErrorCode::PayloadTooLong, std::to_string(bits_.size()) + " bits exceeds " +
                                                 std::to_string(kMaxPayloadBits));
  }

  static Payload from_bytes(std::span<const std::uint8_t> bytes) {
    Bits bits;
    bits.reserve(bytes.size() * 8);
    for (auto byte : bytes)
      for (int i = 7; i >= 0; --i) bits.push_back((byte >> i) & 1);
    return Payload(std::move(bits));
  }

  static Payload from_bytes(std::string_view bytes) {
    return from_bytes(std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
  }

  /// Packs MSB-first; a trailing partial byte is zero-filled.
  std::vector<std::uint8_t> to_bytes() const {
    std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80 >> (i % 8));
    return out;
  }

  const Bits& bits() const { return bits_; }
  std::size_t bit_length() const { return bits_.size(); }

  /// [16-bit big-endian bit length][payload bits]
  Bits frame() const {
    Bits framed;
    framed.reserve(kLengthHeaderBits + bits_.size());
    for (int i = static_cast<int>(kLengthHeaderBits) - 1; i >= 0; --i)
      framed.push_back((bits_.size() >> i) & 1);
    framed.insert(framed.end(), bits_.begin(), bits_.end());
    return framed;
  }

  /// Inverse of frame(); bits after the declared length are ignored.
  static Payload unframe(const Bits& stream) {
    if (stream.size() < kLengthHeaderBits)
      throw Error(ErrorCode::TruncatedStream, "stream holds " + std::to_string(stream.size()) +
                                                  " bits, fewer than the length header");
    std::size_t length = 0;
    for (std::size_t i = 0; i < kLengthHeaderBits; ++i) length = (length << 1) | stream[i];
    if (stream.size() < kLengthHeaderBits + length)
      throw Error(ErrorCode::TruncatedStream,
                  "header declares " + std::to_string(length) + " bits, stream carries " +
                      std::to_string(stream.size() - kLengthHeaderBits));
    return Payload(Bits(stream.begin() + kLengthHeaderBits,
                        stream.begin() + static_cast<std::ptrdiff_t>(kLengthHeaderBits + length)));
  }

  friend bool operator==(const Payload&, const Payload&) = default;

 private:
  Bits bits_;
};

}  // namespace kgstega
