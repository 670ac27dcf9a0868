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

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "graph.hpp"

namespace mtm {

enum class Side { kG, kH };

/// Fixes the column of one vertex to a single row of P1 (side G) or P2 (side H).
struct Pin {
  Side side = Side::kG;
  std::size_t vertex = 0;
  std::size_t row = 0;
};

enum class Init { kUniform, kCustom };

struct SolverConfig {
  std::size_t k_max = 2;
  double epsilon = 1e-6;
  double lambda = 0.0;  // weight of the local similarity term
  double mu = 0.0;      // weight of the neighbour-merge bonus
  std::size_t max_iters = 1000;
  std::uint64_t seed = 0;

  /// N_G x N_H matrix C entering lambda * tr(C^T P1^T P2). Required when
  /// lambda > 0.
  std::optional<Matrix> similarity;
  /// Uses -C instead of C, for when C holds similarities rather than
  /// dissimilarities.
  bool negate_similarity = false;

  Init init = Init::kUniform;
  Matrix init_p1;
  Matrix init_p2;

  std::vector<Pin> pinned;
};

/// A pair (P1, P2) of N_K x N_G and N_K x N_H matrices.
struct AssignmentPair {
  Matrix p1;
  Matrix p2;
};

/// Number of cluster rows: min(N_G, N_H).
std::size_t cluster_rows(const Graph& g, const Graph& h);

/// (1 - lambda) ||P1 G P1^T - P2 H P2^T||_F^2 + lambda tr(C^T P1^T P2)
///   - mu (tr(G^T P1^T P1) + tr(H^T P2^T P2)).
/// G enters untransposed, which fixes the convention for directed graphs.
double objective(const Graph& g, const Graph& h, const Matrix& p1, const Matrix& p2, const SolverConfig& cfg);

/// Partial derivatives of `objective` with respect to P1 and P2.
AssignmentPair gradient(const Graph& g, const Graph& h, const Matrix& p1, const Matrix& p2, const SolverConfig& cfg);

/// Linear minimisation oracle: minimises <grad, (Q1, Q2)> over binary
/// matrices with unit column sums and row sums at most k_max, honouring the
/// pinned columns of cfg. The two halves decouple and are solved separately.
AssignmentPair fw_direction(const Matrix& grad1, const Matrix& grad2, const SolverConfig& cfg);

struct LineSearchResult {
  double alpha = 0.0;
  double value = 0.0;  // interpolated phi(alpha)
  bool stalled = false;
  std::array<double, 5> coeffs{};  // phi(a) = sum coeffs[k] a^k
};

/// Minimiser over [0, 1] of the polynomial sum coeffs[k] a^k (degree <= 4),
/// using the closed-form roots of its cubic derivative and both endpoints.
LineSearchResult minimize_quartic(const std::array<double, 5>& coeffs);

/// Recovers the quartic phi from its values at 0, 1/4, 1/2, 3/4, 1 and
/// minimises it over [0, 1].
LineSearchResult line_search(const std::function<double(double)>& phi);

/// Exact line search of the objective along (1 - a) P + a Q.
LineSearchResult line_search(const Graph& g, const Graph& h, const AssignmentPair& p, const AssignmentPair& q,
                             const SolverConfig& cfg);

/// Uniform P1 (every entry 1/N_K) and round-robin P2 (P2[i][j] = 1 iff
/// i == j mod N_K).
AssignmentPair initialize(std::size_t n_g, std::size_t n_h, const SolverConfig& cfg);

enum class Termination { kConverged, kStalled, kMaxIterations };

const char* to_string(Termination t);

struct IterationRecord {
  double objective = 0.0;
  double step = 0.0;
  double gap = 0.0;  // <grad, P - Q>
};

struct SolveTrace {
  double initial_objective = 0.0;
  std::vector<IterationRecord> iterations;
  AssignmentPair solution;
  Termination reason = Termination::kMaxIterations;

  double final_objective() const {
    return iterations.empty() ? initial_objective : iterations.back().objective;
  }
  /// Number of steps where the objective rose by more than tol.
  std::size_t monotone_violations(double tol = 1e-12) const;
};

/// Conditional-gradient minimisation of the relaxed problem. Stops when
/// |dF| + ||dP1||_F + ||dP2||_F < epsilon or after max_iters iterations.
SolveTrace solve_relaxed(const Graph& g, const Graph& h, const SolverConfig& cfg);

/// Checks the relaxed constraints (entries in [0,1], unit column sums, row
/// sums <= k_max, pinned columns) to within tol.
bool is_feasible(const AssignmentPair& p, const SolverConfig& cfg, double tol = 1e-9);

/// C_ij = exp(-(x_i - x_j)^2 - (y_i - y_j)^2) from the vertex coordinates of
/// both graphs.
Matrix coordinate_similarity(const Graph& g, const Graph& h);

/// Throws unless the problem dimensions admit a feasible point.
void validate_problem(const Graph& g, const Graph& h, const SolverConfig& cfg);

}  // namespace mtm
