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

// Receiver side: carrier sentence -> StegoPath, and the ambiguity audit that
// decides whether a graph supports exact extraction at all.
//
// recover_path fails closed. A sentence is accepted only when the labels it
// mentions (longest match first) contain exactly one complete path and that
// path uses every mentioned label.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kgstega/codec.hpp"
#include "kgstega/error.hpp"
#include "kgstega/graph.hpp"
#include "kgstega/path.hpp"
#include "kgstega/tokenize.hpp"

namespace kgstega {

/// Token trie over node labels.
class LabelTrie {
 public:
  explicit LabelTrie(const KnowledgeGraph& g) : nodes_(1) {
    for (const auto& n : g.nodes()) insert(tokenize(n.label), n.id);
  }

  /// Node ids of the labels found in one phrase, scanning left to right and
  /// taking the longest label at each position. Overlapped tokens are
  /// consumed, so "car seat" never also reports "seat".
  std::vector<NodeId> match(const TokenSequence& tokens) const {
    std::vector<NodeId> found;
    std::size_t i = 0;
    while (i < tokens.size()) {
      std::size_t state = 0, best_len = 0;
      NodeId best = 0;
      for (std::size_t j = i; j < tokens.size(); ++j) {
        auto it = nodes_[state].next.find(tokens[j]);
        if (it == nodes_[state].next.end()) break;
        state = it->second;
        if (nodes_[state].terminal) {
          best_len = j - i + 1;
          best = *nodes_[state].terminal;
        }
      }
      if (best_len == 0) {
        ++i;
      } else {
        found.push_back(best);
        i += best_len;
      }
    }
    return found;
  }

 private:
  struct TrieNode {
    std::map<std::string, std::size_t> next;
    std::optional<NodeId> terminal;
  };

  void insert(const TokenSequence& tokens, NodeId id) {
    std::size_t state = 0;
    for (const auto& t : tokens) {
      auto it = nodes_[state].next.find(t);
      if (it == nodes_[state].next.end()) {
        nodes_.push_back({});
        it = nodes_[state].next.emplace(t, nodes_.size() - 1).first;
      }
      state = it->second;
    }
    nodes_[state].terminal = id;
  }

  std::vector<TrieNode> nodes_;
};

namespace detail {

// Complete level-1 -> level-K paths that only visit nodes in `allowed`.
inline std::vector<std::vector<NodeId>> paths_within(const KnowledgeGraph& g,
                                                     const std::set<NodeId>& allowed) {
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> stack;
  std::function<void(NodeId)> walk = [&](NodeId v) {
    stack.push_back(v);
    const int level = g.node(v).level;
    if (level == g.depth()) {
      out.push_back(stack);
    } else {
      for (const auto& e : g.out_edges(v))
        if (allowed.count(e.dst) && g.node(e.dst).level > level) walk(e.dst);
    }
    stack.pop_back();
  };
  for (auto id : allowed)
    if (g.node(id).level == 1) walk(id);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string labels_of(const KnowledgeGraph& g, const std::vector<NodeId>& ids) {
  std::string s;
  for (auto id : ids) {
    if (!s.empty()) s += " -> ";
    s += g.node(id).label;
  }
  return s;
}

}  // namespace detail

/// Reusable recovery context; build once per graph.
class PathRecovery {
 public:
  explicit PathRecovery(KnowledgeGraph g) : g_(std::move(g)), trie_(g_) {}

  const KnowledgeGraph& graph() const { return g_; }

  StegoPath recover(std::string_view sentence, std::span<const Pin> pins = {}) const {
    std::vector<NodeId> matched;
    for (const auto& phrase : tokenize_phrases(sentence)) {
      const auto found = trie_.match(phrase);
      matched.insert(matched.end(), found.begin(), found.end());
    }
    if (matched.empty()) throw Error(ErrorCode::UnknownSentence, "no graph label in sentence");
    const std::set<NodeId> mentioned(matched.begin(), matched.end());

    std::map<int, std::vector<NodeId>> by_level;
    for (auto id : mentioned) by_level[g_.node(id).level].push_back(id);
    for (const auto& [level, ids] : by_level)
      if (ids.size() > 1)
        throw Error(ErrorCode::AmbiguousMatch,
                    std::to_string(ids.size()) + " labels at level " + std::to_string(level));

    const auto candidates = detail::paths_within(g_, mentioned);
    if (candidates.empty())
      throw Error(ErrorCode::NoPathFound, "mentioned labels form no complete path");
    if (candidates.size() > 1)
      throw Error(ErrorCode::AmbiguousMatch,
                  std::to_string(candidates.size()) + " complete paths fit the mentioned labels");
    const auto& nodes = candidates.front();
    if (nodes.size() != mentioned.size())
      throw Error(ErrorCode::AmbiguousMatch, "sentence mentions labels off the recovered path");
    return StegoPath{nodes, 0, pinned_hops_for(g_, nodes, pins)};
  }

 private:
  KnowledgeGraph g_;
  LabelTrie trie_;
};

inline StegoPath recover_path(std::string_view sentence, const KnowledgeGraph& g,
                              std::span<const Pin> pins = {}) {
  return PathRecovery(g).recover(sentence, pins);
}

// ---------------------------------------------------------------------------
// Uniqueness audit
// ---------------------------------------------------------------------------

struct AmbiguityWitness {
  enum class Kind { DuplicateLabelTokens, MultiplePathsForLabelSet, LabelContainment };
  Kind kind;
  /// DuplicateLabelTokens: the colliding labels. LabelContainment: the
  /// containing label first, then every label it contains.
  /// MultiplePathsForLabelSet: the labels of the complete path.
  std::vector<std::string> labels;
  /// MultiplePathsForLabelSet: every complete path within that label set.
  std::vector<std::vector<NodeId>> paths;
};

inline std::string_view kind_name(AmbiguityWitness::Kind k) {
  switch (k) {
    case AmbiguityWitness::Kind::DuplicateLabelTokens: return "DuplicateLabelTokens";
    case AmbiguityWitness::Kind::MultiplePathsForLabelSet: return "MultiplePathsForLabelSet";
    case AmbiguityWitness::Kind::LabelContainment: return "LabelContainment";
  }
  return "Unknown";
}

inline std::string describe(const AmbiguityWitness& w, const KnowledgeGraph& g) {
  std::ostringstream os;
  os << kind_name(w.kind) << ":";
  for (const auto& l : w.labels) os << " '" << l << "'";
  for (const auto& p : w.paths) os << " [" << detail::labels_of(g, p) << "]";
  return os.str();
}

struct UniquenessReport {
  std::vector<AmbiguityWitness> witnesses;
  std::size_t paths_checked = 0;
  std::uint64_t paths_total = 0;  // saturates at max uint64
  bool exhaustive = true;

  bool clean() const { return witnesses.empty(); }
};

inline constexpr std::size_t kExhaustiveAuditLimit = 10000;

inline UniquenessReport validate_uniqueness(const KnowledgeGraph& g,
                                            std::size_t exhaustive_limit = kExhaustiveAuditLimit,
                                            std::uint64_t sample_seed = 0x6b67737465676100ULL) {
  using Kind = AmbiguityWitness::Kind;
  UniquenessReport report;

  std::map<std::string, std::vector<std::string>> by_tokens;
  std::vector<std::pair<std::string, TokenSequence>> labels;
  for (const auto& n : g.nodes()) {
    auto tokens = tokenize(n.label);
    by_tokens[join_tokens(tokens)].push_back(n.label);
    labels.emplace_back(n.label, std::move(tokens));
  }
  for (auto& [_, group] : by_tokens)
    if (group.size() > 1) report.witnesses.push_back({Kind::DuplicateLabelTokens, group, {}});
  for (const auto& [outer, outer_tokens] : labels) {
    AmbiguityWitness w{Kind::LabelContainment, {outer}, {}};
    for (const auto& [inner, inner_tokens] : labels)
      if (inner != outer && inner_tokens.size() < outer_tokens.size() &&
          contains_subsequence(outer_tokens, inner_tokens))
        w.labels.push_back(inner);
    if (w.labels.size() > 1) report.witnesses.push_back(std::move(w));
  }

  // Path counts to level K, saturating.
  std::map<NodeId, std::uint64_t> to_sink;
  std::vector<const Node*> order;
  for (const auto& n : g.nodes()) order.push_back(&n);
  std::sort(order.begin(), order.end(),
            [](const Node* a, const Node* b) { return a->level > b->level; });
  for (const auto* n : order) {
    std::uint64_t c = n->level == g.depth() ? 1 : 0;
    if (n->level < g.depth())
      for (const auto& e : g.out_edges(n->id))
        if (g.node(e.dst).level > n->level &&
            __builtin_add_overflow(c, to_sink[e.dst], &c))
          c = UINT64_MAX;
    to_sink[n->id] = c;
  }
  for (const auto& n : g.nodes())
    if (n.level == 1 && __builtin_add_overflow(report.paths_total, to_sink[n.id],
                                               &report.paths_total))
      report.paths_total = UINT64_MAX;

  std::vector<std::vector<NodeId>> audited;
  if (report.paths_total <= exhaustive_limit) {
    for (auto& p : complete_paths(g)) audited.push_back(std::move(p.nodes));
  } else {
    // Random walks weighted by downstream path counts sample complete paths
    // uniformly.
    report.exhaustive = false;
    std::mt19937_64 rng(sample_seed);
    auto pick = [&](const std::vector<std::pair<NodeId, std::uint64_t>>& options) {
      long double total = 0;
      for (const auto& o : options) total += static_cast<long double>(o.second);
      std::uniform_real_distribution<long double> u(0, total);
      long double r = u(rng);
      for (const auto& o : options) {
        r -= static_cast<long double>(o.second);
        if (r <= 0) return o.first;
      }
      return options.back().first;
    };
    std::set<std::vector<NodeId>> seen;
    std::vector<std::pair<NodeId, std::uint64_t>> starts;
    for (const auto& n : g.nodes())
      if (n.level == 1 && to_sink[n.id] > 0) starts.emplace_back(n.id, to_sink[n.id]);
    for (std::size_t s = 0; s < exhaustive_limit; ++s) {
      std::vector<NodeId> path{pick(starts)};
      while (g.node(path.back()).level < g.depth()) {
        std::vector<std::pair<NodeId, std::uint64_t>> next;
        for (const auto& e : g.out_edges(path.back()))
          if (g.node(e.dst).level > g.node(path.back()).level && to_sink[e.dst] > 0)
            next.emplace_back(e.dst, to_sink[e.dst]);
        path.push_back(pick(next));
      }
      if (seen.insert(path).second) audited.push_back(std::move(path));
    }
  }

  report.paths_checked = audited.size();
  for (const auto& path : audited) {
    const std::set<NodeId> members(path.begin(), path.end());
    auto within = detail::paths_within(g, members);
    if (within.size() > 1) {
      AmbiguityWitness w{Kind::MultiplePathsForLabelSet, {}, std::move(within)};
      for (auto id : path) w.labels.push_back(g.node(id).label);
      report.witnesses.push_back(std::move(w));
    }
  }
  return report;
}

}  // namespace kgstega
