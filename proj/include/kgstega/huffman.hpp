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

// Deterministic Huffman prefix codes over labeled, weighted symbols.
//
// Construction: repeatedly merge the two items of smallest weight, ties going
// to the item whose subtree holds the lexicographically smallest label. In
// each merge the heavier item (tie: smaller label) takes branch bit 0. The
// caller may then flip the two branches of internal node i (numbered in merge
// order from 0), which permutes codeword values but never their lengths.
//
// A single symbol gets the empty codeword.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kgstega/bits.hpp"
#include "kgstega/error.hpp"
#include "kgstega/path.hpp"

namespace kgstega {

struct CodeSymbol {
  NodeId id = 0;
  std::string label;
  std::uint64_t weight = 1;
};

class PrefixCode {
 public:
  using FlipFn = std::function<bool(std::uint32_t internal_index)>;

  PrefixCode() = default;

  static PrefixCode build(std::vector<CodeSymbol> symbols, const FlipFn& flip) {
    if (symbols.empty()) throw Error(ErrorCode::InvalidArgument, "prefix code over no symbols");
    PrefixCode code;
    code.symbols_ = std::move(symbols);

    struct Item {
      std::uint64_t weight;
      std::string min_label;
      int ref;  // >= 0 internal node, < 0 leaf -(i+1)
      bool operator<(const Item& o) const {
        return weight != o.weight ? weight < o.weight : min_label < o.min_label;
      }
    };
    std::set<Item> queue;
    for (std::size_t i = 0; i < code.symbols_.size(); ++i) {
      const auto& s = code.symbols_[i];
      if (s.weight == 0) throw Error(ErrorCode::NonPositiveWeight, "symbol '" + s.label + "'");
      if (!queue.insert({s.weight, s.label, -static_cast<int>(i) - 1}).second)
        throw Error(ErrorCode::DuplicateLabel, "symbol '" + s.label + "'");
    }
    while (queue.size() > 1) {
      const Item lo = *queue.begin();
      queue.erase(queue.begin());
      const Item hi = *queue.begin();
      queue.erase(queue.begin());
      // lo precedes hi: lighter, or equally heavy with the smaller label.
      std::array<int, 2> child = lo.weight < hi.weight ? std::array{hi.ref, lo.ref}
                                                       : std::array{lo.ref, hi.ref};
      const auto index = static_cast<std::uint32_t>(code.tree_.size());
      if (flip && flip(index)) std::swap(child[0], child[1]);
      code.tree_.push_back(child);
      std::uint64_t sum = 0;
      if (__builtin_add_overflow(lo.weight, hi.weight, &sum))
        throw Error(ErrorCode::WeightOverflow, "edge weights overflow 64 bits");
      queue.insert({sum, std::min(lo.min_label, hi.min_label), static_cast<int>(index)});
    }
    code.root_ = queue.begin()->ref;
    code.codewords_.assign(code.symbols_.size(), {});
    code.assign_codewords(code.root_, {});
    return code;
  }

  std::size_t size() const { return symbols_.size(); }
  const std::vector<CodeSymbol>& symbols() const { return symbols_; }
  const std::vector<Bits>& codewords() const { return codewords_; }
  const Bits& codeword(std::size_t symbol) const { return codewords_.at(symbol); }

  std::optional<std::size_t> find(NodeId id) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_[i].id == id) return i;
    return std::nullopt;
  }

  /// Greedy prefix match; pulls padding zeros once the cursor is dry.
  std::size_t decode(BitCursor& cursor) const {
    int ref = root_;
    while (ref >= 0) ref = tree_[static_cast<std::size_t>(ref)][cursor.next() ? 1 : 0];
    return static_cast<std::size_t>(-ref - 1);
  }

  std::vector<std::size_t> lengths() const {
    std::vector<std::size_t> out;
    for (const auto& c : codewords_) out.push_back(c.size());
    return out;
  }

  std::size_t max_length() const {
    std::size_t m = 0;
    for (const auto& c : codewords_) m = std::max(m, c.size());
    return m;
  }

  /// Sum of weight * codeword length.
  std::uint64_t weighted_length() const {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      total += symbols_[i].weight * codewords_[i].size();
    return total;
  }

 private:
  void assign_codewords(int ref, Bits prefix) {
    if (ref < 0) {
      codewords_[static_cast<std::size_t>(-ref - 1)] = std::move(prefix);
      return;
    }
    const auto node = tree_[static_cast<std::size_t>(ref)];
    Bits left = prefix;
    left.push_back(false);
    assign_codewords(node[0], std::move(left));
    prefix.push_back(true);
    assign_codewords(node[1], std::move(prefix));
  }

  std::vector<CodeSymbol> symbols_;
  std::vector<Bits> codewords_;
  std::vector<std::array<int, 2>> tree_;
  int root_ = -1;
};

}  // namespace kgstega
