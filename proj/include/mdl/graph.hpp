// Copyright 2026 The mdl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "mdl/rng.hpp"

namespace mdl {

/// Undirected simple graph in compressed adjacency form. Immutable after
/// construction; safe to read from any number of threads.
///
/// Invariants: no self-loops, symmetric adjacency, neighbor lists sorted
/// ascending, edge_count == neighbors.size() / 2.
struct GraphSample {
  std::uint32_t vertex_count = 0;
  std::uint64_t edge_count = 0;
  std::vector<std::uint64_t> offsets;    // vertex_count + 1 entries
  std::vector<std::uint32_t> neighbors;  // grouped by vertex

  std::span<const std::uint32_t> adjacency(std::uint32_t v) const {
    return {neighbors.data() + offsets[v],
            neighbors.data() + offsets[v + 1]};
  }

  std::uint32_t degree(std::uint32_t v) const {
    return static_cast<std::uint32_t>(offsets[v + 1] - offsets[v]);
  }
};

/// Draws a G(V, p) sample: each of the C(V,2) vertex pairs becomes an edge
/// independently with probability p. Runs in expected O(edges + V) time by
/// skipping geometrically distributed gaps in the linearized pair order.
///
/// Throws std::invalid_argument for vertex_count == 0 or p outside [0, 1].
GraphSample sample_gnp(std::uint32_t vertex_count, double p,
                       SplitMix64& stream);

/// Same as sample_gnp, reusing the capacity of `out` and `edge_scratch`.
void sample_gnp_into(std::uint32_t vertex_count, double p, SplitMix64& stream,
                     GraphSample& out, std::vector<std::uint64_t>& edge_scratch);

/// Text edge list: header "V E", then one "u v" line per edge with u < v.
void write_edge_list(const GraphSample& graph, std::ostream& os);

}  // namespace mdl
