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
#include <span>
#include <vector>

#include "graph.hpp"

namespace mtm {

struct Assignment {
  std::vector<std::size_t> col_of_row;  // permutation: row i -> column col_of_row[i]
  double cost = 0.0;
};

/// Minimum-cost perfect assignment of a square matrix (Hungarian method with
/// potentials, O(n^3)). Ties resolve deterministically by scan order.
Assignment hungarian(const Matrix& cost);

/// Rectangular variant: assigns every row of an r x c cost matrix (r <= c) to a
/// distinct column. Equivalent to padding with zero-cost dummy rows.
Assignment assign_rows(const Matrix& cost);

/// Binary matrix with unit column sums and capped row sums, stored as the row
/// chosen for each column.
struct SemiAssignment {
  std::vector<std::size_t> row_of_col;
  std::size_t rows = 0;
  double objective = 0.0;

  Matrix to_matrix() const;
};

/// Minimises sum(cost .* A) over binary A with unit column sums and row sums at
/// most k_max. Throws Error::kInfeasible when k_max * rows < cols.
SemiAssignment solve_semi_assignment(const Matrix& cost, std::size_t k_max);

/// Same with a capacity per row.
SemiAssignment solve_semi_assignment(const Matrix& cost, std::span<const std::size_t> capacity);

}  // namespace mtm
