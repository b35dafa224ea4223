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
#include <vector>

namespace kgstega {

using NodeId = std::int64_t;

/// A level-descending walk through the graph.
///
/// Hop `k` is the choice of `nodes[k]`: hop 0 selects the start node, hop
/// k >= 1 traverses the edge nodes[k-1] -> nodes[k]. `pinned_hops` holds the
/// (sorted) hop indices that were forced by a pin and carried no bits.
struct StegoPath {
  std::vector<NodeId> nodes;
  std::size_t bits_consumed = 0;
  std::vector<std::size_t> pinned_hops;

  bool is_pinned(std::size_t hop) const {
    for (auto h : pinned_hops)
      if (h == hop) return true;
    return false;
  }

  friend bool operator==(const StegoPath&, const StegoPath&) = default;
};

}  // namespace kgstega
