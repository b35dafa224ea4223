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

#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "kgstega/codec.hpp"
#include "kgstega/graph.hpp"
#include "kgstega/realizer.hpp"

#ifndef KGSTEGA_DEMO_DIR
#error "KGSTEGA_DEMO_DIR must point at the demo fixture"
#endif

// Expects `stmt` to throw kgstega::Error carrying `code`.
#define EXPECT_KG_ERROR(stmt, expected_code)                                        \
  do {                                                                              \
    try {                                                                           \
      stmt;                                                                         \
      ADD_FAILURE() << "no error thrown, expected " << ::kgstega::error_name(expected_code); \
    } catch (const ::kgstega::Error& kg_error_) {                                   \
      EXPECT_EQ(kg_error_.code(), expected_code) << kg_error_.what();               \
    }                                                                               \
  } while (0)

namespace kgstega::testing {

inline std::string demo_file(const std::string& name) {
  return std::string(KGSTEGA_DEMO_DIR) + "/" + name;
}

inline KnowledgeGraph demo_graph() {
  return load_graph_files(demo_file("nodes.tsv"), demo_file("edges.tsv"));
}

inline std::vector<Template> demo_templates() { return load_templates_file(demo_file("templates.tsv")); }

inline std::vector<std::string> demo_corpus() {
  std::ifstream in(demo_file("corpus.txt"));
  return read_lines(in);
}

inline const std::string kDemoSecret = "demo-shared-secret-0123456789";

inline StegoKey demo_key(std::vector<Pin> pins = {}) { return StegoKey{kDemoSecret, std::move(pins)}; }

/// The four pin configurations of the round-trip law.
inline std::vector<std::vector<Pin>> demo_pin_configs() {
  return {{}, {{1, "car"}}, {{1, "car"}, {2, "engine"}}, {{3, "good"}}};
}

inline NodeId id_of(const KnowledgeGraph& g, const std::string& label) {
  return g.find_label(label)->id;
}

inline std::vector<NodeId> ids_of(const KnowledgeGraph& g, const std::vector<std::string>& labels) {
  std::vector<NodeId> out;
  for (const auto& l : labels) out.push_back(id_of(g, l));
  return out;
}

inline KnowledgeGraph graph_from(const std::string& nodes, const std::string& edges,
                                 LoadMode mode = LoadMode::Strict) {
  std::istringstream n(nodes), e(edges);
  return load_graph(n, e, mode);
}

}  // namespace kgstega::testing
