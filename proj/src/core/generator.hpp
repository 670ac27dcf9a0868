// Copyright 2026 The mtm Authors
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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "graph.hpp"
#include "random.hpp"

namespace mtm {

struct SyntheticConfig {
  std::size_t n = 30;    // base graph size
  double p = 0.1;        // edge probability
  std::size_t m = 3;     // vertex splits per graph
  double sigma = 0.05;   // noise level
  std::uint64_t seed = 0;
};

/// A synthetic pair plus the base vertex each final vertex descends from.
struct SyntheticPair {
  Graph g;
  Graph h;
  std::vector<std::size_t> origin_g;
  std::vector<std::size_t> origin_h;
  std::size_t base_edges = 0;
  std::size_t toggles_per_graph = 0;
};

/// Number of edge toggles applied to each graph: floor(sigma * p * n^2).
std::size_t noise_toggle_count(const SyntheticConfig& cfg);

/// Erdos-Renyi G(n, p), undirected, no self-loops.
Graph erdos_renyi(std::size_t n, double p, Rng& rng);

/// Replaces vertex v by two vertices: v keeps its index, the new vertex is
/// appended. Each incident edge moves to exactly one of them with probability
/// 1/2; no edge joins the two.
Graph split_vertex(const Graph& graph, std::size_t v, Rng& rng);

/// Toggles the presence of an edge at `count` uniformly random vertex pairs
/// with distinct endpoints.
Graph toggle_edges(const Graph& graph, std::size_t count, Rng& rng);

/// Base graph, permuted copy, independent splits (targets drawn without
/// replacement from the base vertices) and independent edge noise.
SyntheticPair generate_pair(const SyntheticConfig& cfg);

std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng);

}  // namespace mtm
