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

// Path coding: secret bits select a level-descending walk, one Huffman
// codeword per hop.
//
// Walk rules, shared by embedding and extraction:
//  * hop 0 picks a level-1 node from the start codebook (weights = total
//    outgoing weight of each candidate), or takes the level-1 pin for free;
//  * at node v below level K, let P be the pin with the smallest level above
//    level(v). If v has an edge to P the hop goes there for free. Otherwise
//    v's codebook covers only the out-edges whose destination can still reach
//    P (all viable out-edges when no pin lies ahead);
//  * the walk ends on reaching level K.
// A codebook with one entry has the empty codeword, so forced hops cost
// nothing either way.
//
// Messages are framed as [16-bit big-endian bit length][bits]; the last path
// is completed with zero padding that is not counted as payload.

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kgstega/bits.hpp"
#include "kgstega/error.hpp"
#include "kgstega/graph.hpp"
#include "kgstega/huffman.hpp"
#include "kgstega/path.hpp"
#include "kgstega/prf.hpp"

namespace kgstega {

inline constexpr std::size_t kMinSecretBytes = 16;

struct Pin {
  int level = 0;
  std::string label;

  friend bool operator==(const Pin&, const Pin&) = default;
};

/// Shared secret: PRF key material plus the pin list. Both parties must hold
/// the same pins, since pins decide which hops carry bits.
struct StegoKey {
  std::string secret;
  std::vector<Pin> pins;

  void validate() const {
    if (secret.size() < kMinSecretBytes)
      throw Error(ErrorCode::InvalidKey, "secret must be at least " +
                                             std::to_string(kMinSecretBytes) + " bytes");
    std::set<int> levels;
    for (const auto& p : pins) {
      if (p.level < 1) throw Error(ErrorCode::InvalidPin, "pin level must be >= 1");
      if (!levels.insert(p.level).second)
        throw Error(ErrorCode::InvalidPin, "two pins at level " + std::to_string(p.level));
    }
  }
};

/// Parses "level:label".
inline Pin parse_pin(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || colon + 1 >= text.size())
    throw Error(ErrorCode::InvalidPin, "expected LEVEL:LABEL, got '" + std::string(text) + "'");
  const auto level = detail::parse_int<int>(text.substr(0, colon));
  if (!level || *level < 1)
    throw Error(ErrorCode::InvalidPin, "bad pin level in '" + std::string(text) + "'");
  return Pin{*level, std::string(text.substr(colon + 1))};
}

struct ResolvedPin {
  int level;
  NodeId node;
};

/// Maps pin labels to node ids, sorted by level.
inline std::vector<ResolvedPin> resolve_pins(const KnowledgeGraph& g, std::span<const Pin> pins) {
  std::vector<ResolvedPin> out;
  for (const auto& p : pins) {
    const Node* n = g.find_label(p.label);
    if (!n || n->level != p.level)
      throw Error(ErrorCode::PinUnreachable,
                  "pin " + std::to_string(p.level) + ":" + p.label + " names no node at that level");
    out.push_back({p.level, n->id});
  }
  std::sort(out.begin(), out.end(),
            [](const ResolvedPin& a, const ResolvedPin& b) { return a.level < b.level; });
  return out;
}

inline const ResolvedPin* next_pin(const std::vector<ResolvedPin>& pins, int level) {
  for (const auto& p : pins)
    if (p.level > level) return &p;
  return nullptr;
}

/// Hop indices a walk over `nodes` spends on pins.
inline std::vector<std::size_t> pinned_hops_for(const KnowledgeGraph& g,
                                                const std::vector<NodeId>& nodes,
                                                std::span<const Pin> pins) {
  const auto resolved = resolve_pins(g, pins);
  std::vector<std::size_t> hops;
  if (nodes.empty()) return hops;
  if (!resolved.empty() && resolved.front().level == 1 && nodes[0] == resolved.front().node)
    hops.push_back(0);
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    const auto* pin = next_pin(resolved, g.node(nodes[k - 1]).level);
    if (pin && nodes[k] == pin->node && g.edge(nodes[k - 1], pin->node)) hops.push_back(k);
  }
  return hops;
}

/// Prefix code over the candidates for one hop.
struct EdgeCodebook {
  NodeId owner = 0;    // node whose out-edges are coded; 0 for the start codebook
  bool start = false;  // codes the choice of level-1 node
  bool pinned = false; // the hop is forced by a pin; the code is a singleton
  PrefixCode code;

  /// Codeword selecting `dst`, if it is a candidate.
  std::optional<Bits> codeword(NodeId dst) const {
    auto i = code.find(dst);
    if (!i) return std::nullopt;
    return code.codeword(*i);
  }
  std::map<NodeId, Bits> entries() const {
    std::map<NodeId, Bits> m;
    for (std::size_t i = 0; i < code.size(); ++i) m[code.symbols()[i].id] = code.codeword(i);
    return m;
  }
  std::vector<std::size_t> lengths() const { return code.lengths(); }
};

namespace detail {

// Builds codebooks for one (viable graph, key) pair.
class CodebookFactory {
 public:
  CodebookFactory(const KnowledgeGraph& viable, const StegoKey& key)
      : g_(&viable), prf_(key.secret), pins_(resolve_pins(viable, key.pins)) {
    key.validate();
    for (const auto& p : pins_) reach_[p.node] = reaching(p.node);
  }

  EdgeCodebook start() const {
    if (!pins_.empty() && pins_.front().level == 1)
      return pinned_book(0, true, pins_.front().node);
    const auto* pin = next_pin(pins_, 0);
    std::vector<CodeSymbol> symbols;
    for (auto id : g_->level_nodes(1)) {
      if (pin && !reach_.at(pin->node).count(id)) continue;
      const auto& n = g_->node(id);
      symbols.push_back({id, n.label, g_->out_weight(id)});
    }
    if (symbols.empty()) {
      if (pin) throw unreachable(*pin, "no level-1 node");
      throw Error(ErrorCode::EmptyViableGraph, "no level-1 node");
    }
    return coded_book(0, true, std::move(symbols));
  }

  EdgeCodebook for_node(NodeId v) const {
    const auto& node = g_->node(v);
    const auto edges = g_->out_edges(v);
    if (edges.empty())
      throw Error(ErrorCode::NoViableEdges, "node '" + node.label + "' has no viable out-edges");
    const auto* pin = next_pin(pins_, node.level);
    if (pin && g_->edge(v, pin->node)) return pinned_book(v, false, pin->node);
    std::vector<CodeSymbol> symbols;
    for (const auto& e : edges) {
      if (pin && !reach_.at(pin->node).count(e.dst)) continue;
      symbols.push_back({e.dst, g_->node(e.dst).label, e.weight});
    }
    if (symbols.empty()) throw unreachable(*pin, "node '" + node.label + "'");
    return coded_book(v, false, std::move(symbols));
  }

  const std::vector<ResolvedPin>& pins() const { return pins_; }

 private:
  std::set<NodeId> reaching(NodeId target) const {
    std::set<NodeId> ok{target};
    std::vector<const Node*> order;
    for (const auto& n : g_->nodes()) order.push_back(&n);
    std::sort(order.begin(), order.end(),
              [](const Node* a, const Node* b) { return a->level > b->level; });
    for (const auto* n : order)
      for (const auto& e : g_->out_edges(n->id))
        if (ok.count(e.dst)) {
          ok.insert(n->id);
          break;
        }
    return ok;
  }

  Error unreachable(const ResolvedPin& pin, const std::string& from) const {
    return Error(ErrorCode::PinUnreachable, "(" + std::to_string(pin.level) + ", " +
                                                g_->node(pin.node).label + ") from " + from);
  }

  EdgeCodebook pinned_book(NodeId owner, bool start, NodeId target) const {
    const auto& n = g_->node(target);
    return EdgeCodebook{owner, start, true, PrefixCode::build({{target, n.label, 1}}, nullptr)};
  }

  EdgeCodebook coded_book(NodeId owner, bool start, std::vector<CodeSymbol> symbols) const {
    const auto tag = start ? kStartFlipTag : kEdgeFlipTag;
    auto flip = [this, tag, owner](std::uint32_t i) { return prf_.bit(tag, owner, i); };
    return EdgeCodebook{owner, start, false, PrefixCode::build(std::move(symbols), flip)};
  }

  const KnowledgeGraph* g_;
  FlipPrf prf_;
  std::vector<ResolvedPin> pins_;
  std::map<NodeId, std::set<NodeId>> reach_;
};

}  // namespace detail

/// Codebook for the out-edges of `v` under `key`; `g` is pruned to its viable
/// subgraph first.
inline EdgeCodebook build_codebook(const KnowledgeGraph& g, NodeId v, const StegoKey& key) {
  g.node(v);
  const auto viable = viable_subgraph(g);
  if (!viable.contains(v))
    throw Error(ErrorCode::NoViableEdges, "node '" + g.node(v).label + "' is not viable");
  return detail::CodebookFactory(viable, key).for_node(v);
}

inline EdgeCodebook start_codebook(const KnowledgeGraph& g, const StegoKey& key) {
  const auto viable = viable_subgraph(g);
  return detail::CodebookFactory(viable, key).start();
}

struct CapacityReport {
  std::size_t min_bits = 0;
  std::size_t max_bits = 0;
  double expected_bits = 0.0;  // under weight-proportional hop probabilities
  std::size_t path_count = 0;  // distinct paths the walk can produce
  bool degenerate = false;     // no path carries any bit
};

/// Embedding and extraction for one (graph, key) pair. The graph is pruned to
/// its viable subgraph on construction and every codebook is built eagerly,
/// so a PathCodec is immutable and safe to share between threads.
class PathCodec {
 public:
  PathCodec(const KnowledgeGraph& g, StegoKey key)
      : graph_(std::make_shared<const KnowledgeGraph>(viable_subgraph(g))), key_(std::move(key)) {
    key_.validate();
    detail::CodebookFactory factory(*graph_, key_);
    start_ = make_entry([&] { return factory.start(); });
    for (const auto& n : graph_->nodes())
      if (n.level < graph_->depth())
        books_.emplace(n.id, make_entry([&] { return factory.for_node(n.id); }));
    capacity_ = compute_capacity();
  }

  const KnowledgeGraph& graph() const { return *graph_; }
  const StegoKey& key() const { return key_; }
  int depth() const { return graph_->depth(); }

  const EdgeCodebook& start_codebook() const { return unwrap(start_); }

  const EdgeCodebook& codebook(NodeId v) const {
    auto it = books_.find(v);
    if (it == books_.end()) {
      graph_->node(v);
      throw Error(ErrorCode::NoViableEdges, "node '" + graph_->node(v).label + "' is a sink");
    }
    return unwrap(it->second);
  }

  /// Consumes bits from `cursor` (padding with zeros when it runs dry) to
  /// select one complete path.
  StegoPath embed_path(BitCursor& cursor) const {
    StegoPath path;
    auto step = [&](const EdgeCodebook& book) {
      const auto before = cursor.position();
      const auto pick = book.code.decode(cursor);
      path.bits_consumed += cursor.position() - before;
      if (book.pinned) path.pinned_hops.push_back(path.nodes.size());
      path.nodes.push_back(book.code.symbols()[pick].id);
    };
    step(start_codebook());
    while (graph_->node(path.nodes.back()).level < depth()) step(codebook(path.nodes.back()));
    return path;
  }

  /// Replays the walk and returns every codeword along `p`, padding included.
  Bits extract_path(const StegoPath& p) const {
    check_path(p);
    for (auto hop : p.pinned_hops)
      if (hop >= p.nodes.size())
        throw Error(ErrorCode::PinMismatch, "pinned hop " + std::to_string(hop) + " out of range");
    Bits out;
    for (std::size_t k = 0; k < p.nodes.size(); ++k) {
      const auto& book = k == 0 ? start_codebook() : codebook(p.nodes[k - 1]);
      const auto code = book.codeword(p.nodes[k]);
      if (book.pinned != p.is_pinned(k) || !code)
        throw Error(ErrorCode::PinMismatch,
                    "hop " + std::to_string(k) + " to '" + graph_->node(p.nodes[k]).label +
                        "' disagrees with the key's pins");
      out.insert(out.end(), code->begin(), code->end());
    }
    return out;
  }

  std::vector<StegoPath> embed_message(const Payload& payload) const {
    if (capacity().max_bits == 0)
      throw Error(ErrorCode::ZeroCapacity, "every path carries zero bits under this key");
    const Bits frame = payload.frame();
    BitCursor cursor(frame);
    std::vector<StegoPath> paths;
    while (!cursor.exhausted()) paths.push_back(embed_path(cursor));
    return paths;
  }

  /// Paths must arrive in transmission order; reordering corrupts the
  /// payload (or fails with TruncatedStream) and is not detected otherwise.
  Payload extract_message(std::span<const StegoPath> paths) const {
    Bits stream;
    for (const auto& p : paths) {
      auto bits = extract_path(p);
      stream.insert(stream.end(), bits.begin(), bits.end());
    }
    return Payload::unframe(stream);
  }

  /// Pinned hops for a bare node sequence, as the extractor needs them.
  std::vector<std::size_t> pinned_hops(const std::vector<NodeId>& nodes) const {
    return pinned_hops_for(*graph_, nodes, key_.pins);
  }

  /// Bits per path over every walk the codec can take.
  const CapacityReport& capacity() const { return capacity_; }

 private:
  CapacityReport compute_capacity() const {
    struct Stat {
      std::size_t min, max, count;
      double expected;
    };
    std::map<NodeId, std::optional<Stat>> memo;
    std::function<std::optional<Stat>(NodeId)> from = [&](NodeId v) -> std::optional<Stat> {
      if (graph_->node(v).level == depth()) return Stat{0, 0, 1, 0.0};
      if (auto it = memo.find(v); it != memo.end()) return it->second;
      auto& entry = books_.at(v);
      std::optional<Stat> result;
      if (const auto* book = std::get_if<EdgeCodebook>(&entry)) result = combine(*book, from);
      memo[v] = result;
      return result;
    };
    CapacityReport report;
    if (const auto* start = std::get_if<EdgeCodebook>(&start_)) {
      if (auto s = combine(*start, from)) {
        report.min_bits = s->min;
        report.max_bits = s->max;
        report.expected_bits = s->expected;
        report.path_count = s->count;
      }
    }
    report.degenerate = report.max_bits == 0;
    return report;
  }

  using Entry = std::variant<EdgeCodebook, Error>;

  template <typename Fn>
  static Entry make_entry(Fn&& fn) {
    try {
      return fn();
    } catch (const Error& e) {
      return e;
    }
  }

  static const EdgeCodebook& unwrap(const Entry& e) {
    if (const auto* err = std::get_if<Error>(&e)) throw *err;
    return std::get<EdgeCodebook>(e);
  }

  template <typename From>
  static auto combine(const EdgeCodebook& book, From& from)
      -> decltype(from(NodeId{})) {
    using Stat = typename decltype(from(NodeId{}))::value_type;
    double total_weight = 0;
    for (const auto& s : book.code.symbols()) total_weight += static_cast<double>(s.weight);
    std::optional<Stat> acc;
    for (std::size_t i = 0; i < book.code.size(); ++i) {
      const auto& sym = book.code.symbols()[i];
      const auto sub = from(sym.id);
      if (!sub) continue;
      const auto len = book.code.codeword(i).size();
      const double p = static_cast<double>(sym.weight) / total_weight;
      if (!acc) {
        acc = Stat{len + sub->min, len + sub->max, 0, 0.0};
      } else {
        acc->min = std::min(acc->min, len + sub->min);
        acc->max = std::max(acc->max, len + sub->max);
      }
      acc->count += sub->count;
      acc->expected += p * (static_cast<double>(len) + sub->expected);
    }
    return acc;
  }

  void check_path(const StegoPath& p) const {
    if (p.nodes.empty()) throw Error(ErrorCode::IncompletePath, "empty path");
    for (auto id : p.nodes)
      if (!graph_->contains(id))
        throw Error(ErrorCode::EdgeNotInGraph, "node " + std::to_string(id) + " is not in the graph");
    if (graph_->node(p.nodes.front()).level != 1)
      throw Error(ErrorCode::IncompletePath, "path does not start at level 1");
    for (std::size_t k = 1; k < p.nodes.size(); ++k)
      if (!graph_->edge(p.nodes[k - 1], p.nodes[k]))
        throw Error(ErrorCode::EdgeNotInGraph, "no edge " + std::to_string(p.nodes[k - 1]) +
                                                   " -> " + std::to_string(p.nodes[k]));
    if (graph_->node(p.nodes.back()).level != depth())
      throw Error(ErrorCode::IncompletePath, "path does not end at level " +
                                                 std::to_string(depth()));
  }

  std::shared_ptr<const KnowledgeGraph> graph_;
  StegoKey key_;
  Entry start_ = Error(ErrorCode::EmptyViableGraph, "uninitialised");
  std::map<NodeId, Entry> books_;
  CapacityReport capacity_;
};

inline StegoPath embed_path(BitCursor& cursor, const KnowledgeGraph& g, const StegoKey& key) {
  return PathCodec(g, key).embed_path(cursor);
}

inline Bits extract_path(const StegoPath& p, const KnowledgeGraph& g, const StegoKey& key) {
  return PathCodec(g, key).extract_path(p);
}

inline std::vector<StegoPath> embed_message(const Payload& m, const KnowledgeGraph& g,
                                            const StegoKey& key) {
  return PathCodec(g, key).embed_message(m);
}

inline Payload extract_message(std::span<const StegoPath> paths, const KnowledgeGraph& g,
                               const StegoKey& key) {
  return PathCodec(g, key).extract_message(paths);
}

inline CapacityReport capacity_report(const KnowledgeGraph& g, const StegoKey& key) {
  return PathCodec(g, key).capacity();
}

}  // namespace kgstega
