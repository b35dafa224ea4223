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

// Path interchange JSON, the boundary format shared with sentence generators:
//
//   {"nodes":[{"id":int,"label":str,"level":int}...],
//    "edges":[{"src":int,"rel":str,"dst":int}...],
//    "order":[node ids],
//    "pinned_hops":[int]}
//
// Field order is fixed as listed.

#include <string>

#include <json.hpp>

#include "kgstega/error.hpp"
#include "kgstega/graph.hpp"
#include "kgstega/path.hpp"

namespace kgstega {

using ordered_json = nlohmann::ordered_json;

inline ordered_json path_to_json(const StegoPath& p, const KnowledgeGraph& g) {
  ordered_json nodes = ordered_json::array();
  for (auto id : p.nodes) {
    const auto& n = g.node(id);
    ordered_json jn;
    jn["id"] = n.id;
    jn["label"] = n.label;
    jn["level"] = n.level;
    nodes.push_back(std::move(jn));
  }
  ordered_json edges = ordered_json::array();
  for (std::size_t k = 1; k < p.nodes.size(); ++k) {
    const Edge* e = g.edge(p.nodes[k - 1], p.nodes[k]);
    if (!e)
      throw Error(ErrorCode::EdgeNotInGraph, "no edge " + std::to_string(p.nodes[k - 1]) +
                                                 " -> " + std::to_string(p.nodes[k]));
    ordered_json je;
    je["src"] = e->src;
    je["rel"] = e->relation;
    je["dst"] = e->dst;
    edges.push_back(std::move(je));
  }
  ordered_json out;
  out["nodes"] = std::move(nodes);
  out["edges"] = std::move(edges);
  out["order"] = p.nodes;
  out["pinned_hops"] = p.pinned_hops;
  return out;
}

/// Parses and checks the document against `g`. bits_consumed is not part of
/// the format and comes back as 0.
inline StegoPath path_from_json(const ordered_json& doc, const KnowledgeGraph& g) {
  auto bad = [](const std::string& why) { return Error(ErrorCode::MalformedInterchange, why); };
  if (!doc.is_object() || !doc.contains("order") || !doc.contains("pinned_hops") ||
      !doc.contains("nodes") || !doc.contains("edges"))
    throw bad("missing nodes/edges/order/pinned_hops");
  StegoPath p;
  try {
    p.nodes = doc.at("order").get<std::vector<NodeId>>();
    p.pinned_hops = doc.at("pinned_hops").get<std::vector<std::size_t>>();
    for (const auto& jn : doc.at("nodes")) {
      const auto id = jn.at("id").get<NodeId>();
      const auto& n = g.node(id);
      if (jn.at("label").get<std::string>() != n.label || jn.at("level").get<int>() != n.level)
        throw bad("node " + std::to_string(id) + " disagrees with the graph");
    }
    for (const auto& je : doc.at("edges")) {
      if (!g.edge(je.at("src").get<NodeId>(), je.at("dst").get<NodeId>()))
        throw bad("edge not in graph");
    }
  } catch (const nlohmann::json::exception& e) {
    throw bad(e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedInterchange) throw;
    throw bad(e.detail());
  }
  return p;
}

}  // namespace kgstega
