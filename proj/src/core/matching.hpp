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
#include <string>
#include <vector>

#include "graph.hpp"
#include "solver.hpp"

namespace mtm {

/// One vertex of the virtual graph of matched clusters.
struct Cluster {
  std::vector<std::size_t> g;
  std::vector<std::size_t> h;
  friend bool operator==(const Cluster&, const Cluster&) = default;
};

/// A discrete many-to-many matching and the objective of its binary (P1, P2).
struct Matching {
  std::vector<Cluster> clusters;
  double objective = 0.0;
};

/// Binary (P1, P2) with one row per cluster, padded with empty rows up to
/// min_rows.
AssignmentPair to_assignment(const Matching& m, std::size_t n_g, std::size_t n_h, std::size_t min_rows = 0);

/// Clusters from the rows of a binary pair; each column goes to its argmax row.
/// Rows empty on both sides are dropped.
Matching from_assignment(const AssignmentPair& p);

/// Objective of the matching recomputed from scratch.
double evaluate(const Matching& m, const Graph& g, const Graph& h, const SolverConfig& cfg);

/// Throws unless every vertex appears in exactly one cluster, each side holds at
/// most k_max vertices, and no cluster is empty.
void validate_matching(const Matching& m, std::size_t n_g, std::size_t n_h, std::size_t k_max);

/// Sorts vertex lists and orders clusters by their smallest member so equal
/// matchings compare equal regardless of cluster numbering.
Matching canonical(Matching m);

/// Lines "cluster <id> | G: <i,...> | H: <j,...>" followed by "objective <F>".
std::string format_matching(const Matching& m);
Matching parse_matching(const std::string& text, const std::string& source = "<string>");

}  // namespace mtm
