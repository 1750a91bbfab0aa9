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

#include "mdl/graph.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace mdl {
namespace {

// Packs an undirected edge (u < v) into one word for the scratch list.
constexpr std::uint64_t pack_edge(std::uint32_t u, std::uint32_t v) {
  return (std::uint64_t{u} << 32) | v;
}

// Builds the compressed adjacency from a lexicographically ordered edge
// list. Two counting passes; each vertex's neighbor list comes out sorted
// because smaller partners are emitted before larger ones.
void build_adjacency(std::uint32_t vertex_count,
                     const std::vector<std::uint64_t>& edges,
                     GraphSample& out) {
  out.vertex_count = vertex_count;
  out.edge_count = edges.size();
  out.offsets.assign(vertex_count + 1, 0);
  for (std::uint64_t e : edges) {
    ++out.offsets[(e >> 32) + 1];
    ++out.offsets[(e & 0xFFFFFFFFu) + 1];
  }
  for (std::uint32_t v = 0; v < vertex_count; ++v) {
    out.offsets[v + 1] += out.offsets[v];
  }
  out.neighbors.resize(2 * edges.size());
  std::vector<std::uint64_t> cursor(out.offsets.begin(), out.offsets.end() - 1);
  for (std::uint64_t e : edges) {
    const auto u = static_cast<std::uint32_t>(e >> 32);
    const auto v = static_cast<std::uint32_t>(e & 0xFFFFFFFFu);
    out.neighbors[cursor[u]++] = v;
    out.neighbors[cursor[v]++] = u;
  }
}

}  // namespace

void sample_gnp_into(std::uint32_t vertex_count, double p, SplitMix64& stream,
                     GraphSample& out, std::vector<std::uint64_t>& edges) {
  if (vertex_count == 0) {
    throw std::invalid_argument("sample_gnp: vertex_count must be positive");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("sample_gnp: p must lie in [0, 1]");
  }

  edges.clear();
  const std::uint64_t total =
      std::uint64_t{vertex_count} * (vertex_count - 1) / 2;

  if (p == 1.0) {
    edges.reserve(total);
    for (std::uint32_t u = 0; u + 1 < vertex_count; ++u) {
      for (std::uint32_t v = u + 1; v < vertex_count; ++v) {
        edges.push_back(pack_edge(u, v));
      }
    }
  } else if (p > 0.0 && total > 0) {
    // Gaps between hits in the linearized pair order are Geometric(p), so we
    // jump straight from one edge to the next instead of testing every pair.
    const double log_q = std::log1p(-p);
    std::uint64_t idx = 0;
    // Row walk: pair index -> (u, v) without any floating-point inversion.
    std::uint32_t row = 0;
    std::uint64_t row_start = 0;
    std::uint64_t row_len = vertex_count - 1;
    while (true) {
      const double gap = std::floor(std::log(stream.next_unit_open()) / log_q);
      idx += gap >= static_cast<double>(total)
                 ? total
                 : static_cast<std::uint64_t>(gap);
      if (idx >= total) break;
      while (idx >= row_start + row_len) {
        row_start += row_len;
        --row_len;
        ++row;
      }
      const auto v = static_cast<std::uint32_t>(row + 1 + (idx - row_start));
      edges.push_back(pack_edge(row, v));
      ++idx;
    }
  }

  build_adjacency(vertex_count, edges, out);
}

GraphSample sample_gnp(std::uint32_t vertex_count, double p,
                       SplitMix64& stream) {
  GraphSample out;
  std::vector<std::uint64_t> edges;
  sample_gnp_into(vertex_count, p, stream, out, edges);
  return out;
}

void write_edge_list(const GraphSample& graph, std::ostream& os) {
  os << graph.vertex_count << ' ' << graph.edge_count << '\n';
  for (std::uint32_t u = 0; u < graph.vertex_count; ++u) {
    for (std::uint32_t v : graph.adjacency(u)) {
      if (u < v) os << u << ' ' << v << '\n';
    }
  }
}

}  // namespace mdl
