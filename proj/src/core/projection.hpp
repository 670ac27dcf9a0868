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
#include <vector>

#include "graph.hpp"
#include "matching.hpp"
#include "solver.hpp"

namespace mtm {

/// Gram matrix of the N_G + N_H columns of the concatenation (P1, P2).
Matrix column_similarity(const Matrix& p1, const Matrix& p2);

/// Turns a clustering of the N_G + N_H vertex points (columns of `points`, G
/// first) into clusters that hold at most k_max vertices per side and number at
/// most max_clusters where capacity allows. Members of an overfull cluster
/// farthest from its centroid are evicted, farthest first, into the nearest
/// cluster with room on their side, or into a new cluster seeded at the point.
std::vector<Cluster> repair_caps(const Matrix& points, const std::vector<std::size_t>& labels, std::size_t n_g,
                                 std::size_t k_max, std::size_t max_clusters);

/// k-means (k = N_K) on the columns of (P1, P2), followed by cap repair.
Matching project_by_clustering(const Graph& g, const Graph& h, const AssignmentPair& relaxed, const SolverConfig& cfg);

struct IncrementalResult {
  Matching matching;
  std::vector<SolveTrace> traces;  // one per relaxed solve
};

/// Forward-selection projection: solve, pin the eligible vertex pair with the
/// largest column dot product to a shared row, re-solve from the previous
/// solution, until every vertex is pinned.
IncrementalResult project_incremental(const Graph& g, const Graph& h, const SolverConfig& cfg);

/// Exhaustive minimiser of the configured objective over all feasible binary
/// (P1, P2). Limited to N_G, N_H <= 6 and k_max <= 3.
Matching brute_force_optimum(const Graph& g, const Graph& h, const SolverConfig& cfg);

}  // namespace mtm
