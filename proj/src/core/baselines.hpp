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
#include <limits>
#include <optional>

#include "graph.hpp"
#include "matching.hpp"
#include "solver.hpp"

namespace mtm {

struct SpectralConfig {
  std::size_t num_eigenvectors = 2;
  std::optional<std::size_t> clusters;  // defaults to N_K
};

/// Spectral many-to-many matching: vertices are embedded by the rows of the
/// leading eigenvectors of their adjacency matrix (sign fixed so the
/// largest-magnitude entry is positive, rows scaled to unit length), the pooled
/// embeddings are clustered with k-means and clusters are capped at k_max per
/// side. `cfg` supplies k_max, the seed and the objective used for reporting.
Matching spectral_match(const Graph& g, const Graph& h, const SpectralConfig& spec, const SolverConfig& cfg);

struct BeamConfig {
  static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();
  std::size_t beam_width = 3;
  double match_cost = 0.0;  // added per G vertex opened with an H partner
  double merge_cost = 0.0;  // added per vertex joining an existing cluster
};

/// Beam search over partial matchings. G vertices are placed in descending
/// degree order (join a cluster, open one with an unused H vertex, or open one
/// alone); remaining H vertices are then placed the same way. States are scored
/// by the objective restricted to the placed vertices with no heuristic. A
/// finite width w returns the best result over widths 1..w.
Matching beam_match(const Graph& g, const Graph& h, const BeamConfig& beam, const SolverConfig& cfg);

}  // namespace mtm
