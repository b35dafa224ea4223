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

// Sentence tokenizer shared by every component that compares text against
// node labels. Embedding and extraction must tokenize identically.
//
// Rules: ASCII letters are lowercased; tokens are separated by Unicode
// whitespace; leading and trailing punctuation is stripped from each token
// (internal punctuation such as the hyphen in "fuel-consumption" is kept);
// empty tokens are dropped.
//
// Stripped punctuation still marks a phrase boundary: a label never matches
// across one, so "fuel, consumption" does not mention "fuel consumption".

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kgstega {

using TokenSequence = std::vector<std::string>;

namespace detail {

struct CodePoint {
  char32_t value;
  std::size_t width;  // bytes consumed
};

// Decodes one UTF-8 sequence at `pos`. Invalid bytes decode as themselves
// with width 1 so the tokenizer never loses input.
inline CodePoint decode_utf8(std::string_view s, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  auto cont = [&](std::size_t i) -> int {
    if (pos + i >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[pos + i]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) return {b0, 1};
  if ((b0 & 0xE0) == 0xC0) {
    const int c1 = cont(1);
    if (c1 >= 0) return {static_cast<char32_t>(((b0 & 0x1F) << 6) | c1), 2};
  } else if ((b0 & 0xF0) == 0xE0) {
    const int c1 = cont(1), c2 = cont(2);
    if (c1 >= 0 && c2 >= 0)
      return {static_cast<char32_t>(((b0 & 0x0F) << 12) | (c1 << 6) | c2), 3};
  } else if ((b0 & 0xF8) == 0xF0) {
    const int c1 = cont(1), c2 = cont(2), c3 = cont(3);
    if (c1 >= 0 && c2 >= 0 && c3 >= 0)
      return {static_cast<char32_t>(((b0 & 0x07) << 18) | (c1 << 12) | (c2 << 6) | c3), 4};
  }
  return {b0, 1};
}

inline bool is_space(char32_t c) {
  switch (c) {
    case U' ': case U'\t': case U'\n': case U'\v': case U'\f': case U'\r':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

inline bool is_punct(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  }
  switch (c) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
    case 0x3001: case 0x3002: case 0x3003:
      return true;
    default:
      return (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E);
  }
}

struct Piece {
  std::size_t begin;
  std::size_t end;
  bool punct;
};

inline std::string finish_token(std::string_view s, const std::vector<Piece>& pieces) {
  std::size_t first = 0, last = pieces.size();
  while (first < last && pieces[first].punct) ++first;
  while (last > first && pieces[last - 1].punct) --last;
  std::string out;
  if (first == last) return out;
  for (std::size_t i = pieces[first].begin; i < pieces[last - 1].end; ++i) {
    char ch = s[i];
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    out.push_back(ch);
  }
  return out;
}

}  // namespace detail

/// Tokens grouped into phrases. A new phrase starts wherever punctuation was
/// stripped between two tokens, or where a token was pure punctuation.
inline std::vector<TokenSequence> tokenize_phrases(std::string_view sentence) {
  std::vector<TokenSequence> phrases(1);
  std::vector<detail::Piece> pieces;
  auto split = [&] {
    if (!phrases.back().empty()) phrases.emplace_back();
  };
  auto flush = [&] {
    if (pieces.empty()) return;
    auto tok = detail::finish_token(sentence, pieces);
    if (tok.empty()) {
      split();
    } else {
      if (pieces.front().punct) split();
      phrases.back().push_back(std::move(tok));
      if (pieces.back().punct) split();
    }
    pieces.clear();
  };
  std::size_t pos = 0;
  while (pos < sentence.size()) {
    const auto cp = detail::decode_utf8(sentence, pos);
    if (detail::is_space(cp.value)) {
      flush();
    } else {
      pieces.push_back({pos, pos + cp.width, detail::is_punct(cp.value)});
    }
    pos += cp.width;
  }
  flush();
  if (phrases.back().empty()) phrases.pop_back();
  return phrases;
}

inline TokenSequence tokenize(std::string_view sentence) {
  TokenSequence tokens;
  for (auto& phrase : tokenize_phrases(sentence))
    for (auto& t : phrase) tokens.push_back(std::move(t));
  return tokens;
}

inline std::string join_tokens(const TokenSequence& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

/// True iff `needle` occurs in `hay` as a contiguous run of whole tokens.
inline bool contains_subsequence(const TokenSequence& hay, const TokenSequence& needle) {
  if (needle.empty() || needle.size() > hay.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < needle.size() && match; ++j) match = hay[i + j] == needle[j];
    if (match) return true;
  }
  return false;
}

inline bool contains_subsequence(const std::vector<TokenSequence>& phrases,
                                 const TokenSequence& needle) {
  for (const auto& p : phrases)
    if (contains_subsequence(p, needle)) return true;
  return false;
}

/// True iff `label` is mentioned in `sentence`: its tokens occur as a
/// contiguous run inside one phrase.
inline bool mentions(std::string_view sentence, const TokenSequence& label) {
  return contains_subsequence(tokenize_phrases(sentence), label);
}

}  // namespace kgstega
