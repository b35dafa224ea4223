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

// Leveled knowledge graph: labeled concept nodes at semantic levels 1..K and
// weighted edges that strictly descend in level. Values are immutable once
// built; every transformation returns a new graph.
//
// File formats (UTF-8 TSV, one record per line, blank lines ignored):
//   nodes:  id <TAB> label <TAB> level
//   edges:  src_id <TAB> relation <TAB> dst_id [<TAB> weight]   (weight defaults to 1)

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kgstega/error.hpp"
#include "kgstega/path.hpp"
#include "kgstega/tokenize.hpp"

namespace kgstega {

using Weight = std::uint64_t;

inline constexpr std::size_t kMaxLabelTokens = 4;

struct Node {
  NodeId id = 0;
  std::string label;
  int level = 0;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  std::string relation;
  Weight weight = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class LoadMode {
  Strict,      // all invariants, including strict level descent
  Structural,  // everything except level descent; for auditing with validate_hierarchy
};

class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;

  /// Validates and indexes. Input order does not matter.
  static KnowledgeGraph build(std::vector<Node> nodes, std::vector<Edge> edges,
                              LoadMode mode = LoadMode::Strict) {
    KnowledgeGraph g;
    std::sort(nodes.begin(), nodes.end(),
              [](const Node& a, const Node& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& n = nodes[i];
      if (n.level < 1)
        throw Error(ErrorCode::MalformedLine, "node " + std::to_string(n.id) + " has level < 1");
      check_label(n.label, "node " + std::to_string(n.id));
      if (!g.index_.emplace(n.id, i).second)
        throw Error(ErrorCode::DuplicateId, "node id " + std::to_string(n.id));
      if (!g.by_label_.emplace(n.label, n.id).second)
        throw Error(ErrorCode::DuplicateLabel, "label '" + n.label + "'");
      g.depth_ = std::max(g.depth_, n.level);
    }
    g.nodes_ = std::move(nodes);

    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      return std::pair(a.src, a.dst) < std::pair(b.src, b.dst);
    });
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto& e = edges[i];
      const auto tag = std::to_string(e.src) + "->" + std::to_string(e.dst);
      if (!g.contains(e.src) || !g.contains(e.dst))
        throw Error(ErrorCode::UnknownEndpoint, "edge " + tag);
      if (e.weight == 0) throw Error(ErrorCode::NonPositiveWeight, "edge " + tag);
      if (mode == LoadMode::Strict && g.node(e.dst).level <= g.node(e.src).level)
        throw Error(ErrorCode::LevelViolation, "edge " + tag + " does not descend (level " +
                                                   std::to_string(g.node(e.src).level) + " -> " +
                                                   std::to_string(g.node(e.dst).level) + ")");
      if (i > 0 && edges[i - 1].src == e.src && edges[i - 1].dst == e.dst)
        throw Error(ErrorCode::DuplicateEdge, "edge " + tag);
    }
    g.edges_ = std::move(edges);
    g.reindex_edges();
    return g;
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  /// K: the deepest level present.
  int depth() const { return depth_; }

  bool contains(NodeId id) const { return index_.count(id) != 0; }

  const Node& node(NodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(id));
    return nodes_[it->second];
  }

  const Node* find_label(std::string_view label) const {
    auto it = by_label_.find(std::string(label));
    return it == by_label_.end() ? nullptr : &node(it->second);
  }

  const Edge* edge(NodeId src, NodeId dst) const {
    auto it = index_.find(src);
    if (it == index_.end()) return nullptr;
    for (auto ei : out_[it->second])
      if (edges_[ei].dst == dst) return &edges_[ei];
    return nullptr;
  }

  /// Outgoing edges sorted by (weight descending, destination label ascending).
  std::vector<Edge> out_edges(NodeId v) const {
    auto it = index_.find(v);
    if (it == index_.end()) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(v));
    std::vector<Edge> out;
    out.reserve(out_[it->second].size());
    for (auto ei : out_[it->second]) out.push_back(edges_[ei]);
    return out;
  }

  std::size_t out_degree(NodeId v) const {
    auto it = index_.find(v);
    if (it == index_.end()) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(v));
    return out_[it->second].size();
  }

  /// Sum of outgoing edge weights.
  Weight out_weight(NodeId v) const {
    Weight total = 0;
    for (const auto& e : out_edges(v)) total += e.weight;
    return total;
  }

  /// Node ids at `level`, sorted by label.
  std::vector<NodeId> level_nodes(int level) const {
    std::vector<const Node*> picked;
    for (const auto& n : nodes_)
      if (n.level == level) picked.push_back(&n);
    std::sort(picked.begin(), picked.end(),
              [](const Node* a, const Node* b) { return a->label < b->label; });
    std::vector<NodeId> ids;
    for (const auto* n : picked) ids.push_back(n->id);
    return ids;
  }

  friend bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_ && a.depth_ == b.depth_;
  }

  /// Labels must be 1..4 canonical tokens: already lowercase, single-spaced,
  /// and free of edge punctuation, so that tokenize(label) == label.
  static void check_label(const std::string& label, const std::string& where) {
    const auto tokens = tokenize(label);
    if (tokens.empty() || tokens.size() > kMaxLabelTokens || join_tokens(tokens) != label)
      throw Error(ErrorCode::MalformedLine, where + ": invalid label '" + label + "'");
  }

 private:
  void reindex_edges() {
    out_.assign(nodes_.size(), {});
    for (std::size_t i = 0; i < edges_.size(); ++i) out_[index_.at(edges_[i].src)].push_back(i);
    for (auto& list : out_) {
      std::sort(list.begin(), list.end(), [this](std::size_t a, std::size_t b) {
        const auto& ea = edges_[a];
        const auto& eb = edges_[b];
        if (ea.weight != eb.weight) return ea.weight > eb.weight;
        return node(ea.dst).label < node(eb.dst).label;
      });
    }
  }

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  int depth_ = 0;
  std::unordered_map<NodeId, std::size_t> index_;
  std::unordered_map<std::string, NodeId> by_label_;
  std::vector<std::vector<std::size_t>> out_;
};

// ---------------------------------------------------------------------------
// Ingestion
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  Int value{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return value;
}

inline Error malformed(std::size_t line_no, const std::string& what) {
  return Error(ErrorCode::MalformedLine, "line " + std::to_string(line_no) + ": " + what);
}

// Calls fn(line_no, line) for every non-blank line, with any trailing '\r' removed.
inline void for_each_line(std::istream& in,
                          const std::function<void(std::size_t, std::string_view)>& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    fn(line_no, line);
  }
}

}  // namespace detail

inline std::vector<Node> parse_nodes(std::istream& in) {
  std::vector<Node> nodes;
  detail::for_each_line(in, [&](std::size_t no, std::string_view line) {
    const auto f = detail::split_tabs(line);
    if (f.size() != 3) throw detail::malformed(no, "expected id<TAB>label<TAB>level");
    const auto id = detail::parse_int<NodeId>(f[0]);
    const auto level = detail::parse_int<int>(f[2]);
    if (!id) throw detail::malformed(no, "bad node id");
    if (!level || *level < 1) throw detail::malformed(no, "bad level");
    Node n{*id, std::string(f[1]), *level};
    try {
      KnowledgeGraph::check_label(n.label, "node " + std::to_string(n.id));
    } catch (const Error& e) {
      throw detail::malformed(no, e.detail());
    }
    nodes.push_back(std::move(n));
  });
  return nodes;
}

inline std::vector<Edge> parse_edges(std::istream& in) {
  std::vector<Edge> edges;
  detail::for_each_line(in, [&](std::size_t no, std::string_view line) {
    const auto f = detail::split_tabs(line);
    if (f.size() != 3 && f.size() != 4)
      throw detail::malformed(no, "expected src<TAB>relation<TAB>dst[<TAB>weight]");
    const auto src = detail::parse_int<NodeId>(f[0]);
    const auto dst = detail::parse_int<NodeId>(f[2]);
    if (!src || !dst) throw detail::malformed(no, "bad endpoint id");
    Weight weight = 1;
    if (f.size() == 4) {
      const auto signed_w = detail::parse_int<std::int64_t>(f[3]);
      if (!signed_w) throw detail::malformed(no, "weight must be an integer");
      if (*signed_w <= 0)
        throw Error(ErrorCode::NonPositiveWeight, "line " + std::to_string(no));
      weight = static_cast<Weight>(*signed_w);
    }
    edges.push_back(Edge{*src, *dst, std::string(f[1]), weight});
  });
  return edges;
}

inline KnowledgeGraph load_graph(std::istream& nodes_source, std::istream& edges_source,
                                 LoadMode mode = LoadMode::Strict) {
  return KnowledgeGraph::build(parse_nodes(nodes_source), parse_edges(edges_source), mode);
}

inline KnowledgeGraph load_graph_files(const std::string& nodes_path,
                                       const std::string& edges_path,
                                       LoadMode mode = LoadMode::Strict) {
  std::ifstream nodes(nodes_path);
  if (!nodes) throw Error(ErrorCode::IoError, "cannot open " + nodes_path);
  std::ifstream edges(edges_path);
  if (!edges) throw Error(ErrorCode::IoError, "cannot open " + edges_path);
  return load_graph(nodes, edges, mode);
}

// ---------------------------------------------------------------------------
// Queries and transformations
// ---------------------------------------------------------------------------

inline std::vector<Edge> out_edges(const KnowledgeGraph& g, NodeId v) { return g.out_edges(v); }

namespace detail {

// Nodes that can reach some level-K node along strictly descending edges.
inline std::set<NodeId> reaches_sink(const KnowledgeGraph& g) {
  std::vector<const Node*> order;
  for (const auto& n : g.nodes()) order.push_back(&n);
  std::sort(order.begin(), order.end(),
            [](const Node* a, const Node* b) { return a->level > b->level; });
  std::set<NodeId> ok;
  for (const auto* n : order) {
    if (n->level == g.depth()) {
      ok.insert(n->id);
      continue;
    }
    for (const auto& e : g.out_edges(n->id)) {
      if (g.node(e.dst).level > n->level && ok.count(e.dst)) {
        ok.insert(n->id);
        break;
      }
    }
  }
  return ok;
}

}  // namespace detail

struct HierarchyViolation {
  enum class Kind { AscendingEdge, DeadEnd };
  Kind kind;
  NodeId src = 0;  // the edge source, or the dead-end node
  NodeId dst = 0;  // edge destination; unused for DeadEnd
};

/// Audit of the level rule. An empty result means the graph is valid.
inline std::vector<HierarchyViolation> validate_hierarchy(const KnowledgeGraph& g) {
  std::vector<HierarchyViolation> report;
  for (const auto& e : g.edges())
    if (g.node(e.dst).level <= g.node(e.src).level)
      report.push_back({HierarchyViolation::Kind::AscendingEdge, e.src, e.dst});
  const auto ok = detail::reaches_sink(g);
  for (const auto& n : g.nodes())
    if (n.level < g.depth() && !ok.count(n.id))
      report.push_back({HierarchyViolation::Kind::DeadEnd, n.id, 0});
  return report;
}

/// Keeps exactly the nodes and edges that lie on some complete
/// level-1 -> level-K path. Idempotent.
inline KnowledgeGraph viable_subgraph(const KnowledgeGraph& g) {
  if (g.depth() < 2) throw Error(ErrorCode::EmptyViableGraph, "graph has fewer than two levels");
  const auto to_sink = detail::reaches_sink(g);

  std::vector<const Node*> order;
  for (const auto& n : g.nodes()) order.push_back(&n);
  std::sort(order.begin(), order.end(),
            [](const Node* a, const Node* b) { return a->level < b->level; });
  std::set<NodeId> from_start;
  for (const auto* n : order) {
    if (n->level == 1 && to_sink.count(n->id)) from_start.insert(n->id);
    if (!from_start.count(n->id)) continue;
    for (const auto& e : g.out_edges(n->id))
      if (g.node(e.dst).level > n->level && to_sink.count(e.dst)) from_start.insert(e.dst);
  }

  std::vector<Node> nodes;
  for (const auto& n : g.nodes())
    if (from_start.count(n.id)) nodes.push_back(n);
  if (std::none_of(nodes.begin(), nodes.end(), [](const Node& n) { return n.level == 1; }))
    throw Error(ErrorCode::EmptyViableGraph, "no level-1 node reaches level " +
                                                 std::to_string(g.depth()));
  std::vector<Edge> edges;
  for (const auto& e : g.edges())
    if (from_start.count(e.src) && from_start.count(e.dst) &&
        g.node(e.dst).level > g.node(e.src).level)
      edges.push_back(e);
  return KnowledgeGraph::build(std::move(nodes), std::move(edges));
}

/// weight(e) = 1 + number of sentences mentioning both endpoint labels.
inline KnowledgeGraph estimate_edge_weights(const KnowledgeGraph& g,
                                            const std::vector<std::string>& corpus) {
  std::map<std::pair<NodeId, NodeId>, Weight> counts;
  std::vector<std::pair<NodeId, TokenSequence>> labels;
  for (const auto& n : g.nodes()) labels.emplace_back(n.id, tokenize(n.label));
  for (const auto& sentence : corpus) {
    const auto phrases = tokenize_phrases(sentence);
    if (phrases.empty()) continue;
    std::set<NodeId> present;
    for (const auto& [id, label] : labels)
      if (contains_subsequence(phrases, label)) present.insert(id);
    if (present.size() < 2) continue;
    for (const auto& e : g.edges())
      if (present.count(e.src) && present.count(e.dst)) ++counts[{e.src, e.dst}];
  }
  std::vector<Edge> edges = g.edges();
  for (auto& e : edges) {
    auto it = counts.find({e.src, e.dst});
    e.weight = 1 + (it == counts.end() ? 0 : it->second);
  }
  return KnowledgeGraph::build(g.nodes(), std::move(edges), LoadMode::Structural);
}

inline std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

/// All simple descending paths src -> dst, in lexicographic order of their
/// node-id sequences.
inline std::vector<StegoPath> enumerate_paths(const KnowledgeGraph& g, NodeId src, NodeId dst) {
  g.node(src);
  g.node(dst);
  std::vector<StegoPath> found;
  std::vector<NodeId> stack{src};
  std::function<void(NodeId)> walk = [&](NodeId v) {
    if (v == dst) {
      found.push_back(StegoPath{stack, 0, {}});
      return;
    }
    const int level = g.node(v).level;
    for (const auto& e : g.out_edges(v)) {
      if (g.node(e.dst).level <= level) continue;
      stack.push_back(e.dst);
      walk(e.dst);
      stack.pop_back();
    }
  };
  walk(src);
  std::sort(found.begin(), found.end(),
            [](const StegoPath& a, const StegoPath& b) { return a.nodes < b.nodes; });
  return found;
}

/// Every complete level-1 -> level-K path, lexicographic by node ids.
inline std::vector<StegoPath> complete_paths(const KnowledgeGraph& g) {
  std::vector<StegoPath> all;
  std::vector<NodeId> stack;
  std::function<void(NodeId)> walk = [&](NodeId v) {
    stack.push_back(v);
    const int level = g.node(v).level;
    if (level == g.depth()) {
      all.push_back(StegoPath{stack, 0, {}});
    } else {
      for (const auto& e : g.out_edges(v))
        if (g.node(e.dst).level > level) walk(e.dst);
    }
    stack.pop_back();
  };
  for (const auto& n : g.nodes())
    if (n.level == 1) walk(n.id);
  std::sort(all.begin(), all.end(),
            [](const StegoPath& a, const StegoPath& b) { return a.nodes < b.nodes; });
  return all;
}

}  // namespace kgstega
