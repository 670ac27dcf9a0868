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

#include "assignment.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace mtm {

namespace {

void require_finite(const Matrix& cost) {
  if (!cost.allFinite()) throw Error(Error::Code::kInvalidArgument, "cost matrix has non-finite entries");
}

// Row-major n x m costs with n <= m; returns the column of each row.
std::vector<std::size_t> solve_dense(const std::vector<double>& c, std::size_t n, std::size_t m) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based potentials; column 0 is a sentinel holding the row being inserted.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);

  // Row minima are feasible potentials; rows whose minimum sits in a free
  // column start out matched along a tight edge.
  std::vector<char> done(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    const double* row = &c[(i - 1) * m];
    u[i] = *std::min_element(row, row + m);
    for (std::size_t j = 1; j <= m; ++j) {
      if (match[j] == 0 && row[j - 1] == u[i]) {
        match[j] = i;
        done[i] = 1;
        break;
      }
    }
  }

  for (std::size_t i = 1; i <= n; ++i) {
    if (done[i]) continue;
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      const double* row = &c[(i0 - 1) * m];
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = row[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> col_of_row(n, 0);
  for (std::size_t j = 1; j <= m; ++j)
    if (match[j] != 0) col_of_row[match[j] - 1] = j - 1;
  return col_of_row;
}

}  // namespace

Assignment assign_rows(const Matrix& cost) {
  require_finite(cost);
  const auto n = static_cast<std::size_t>(cost.rows());
  const auto m = static_cast<std::size_t>(cost.cols());
  if (n > m) throw Error(Error::Code::kDimension, "assign_rows needs rows <= cols");
  std::vector<double> c(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) c[i * m + j] = cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  Assignment out;
  out.col_of_row = solve_dense(c, n, m);
  for (std::size_t i = 0; i < n; ++i)
    out.cost += cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(out.col_of_row[i]));
  return out;
}

Assignment hungarian(const Matrix& cost) {
  if (cost.rows() != cost.cols()) throw Error(Error::Code::kDimension, "hungarian needs a square cost matrix");
  return assign_rows(cost);
}

Matrix SemiAssignment::to_matrix() const {
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(row_of_col.size()));
  for (std::size_t j = 0; j < row_of_col.size(); ++j)
    a(static_cast<Eigen::Index>(row_of_col[j]), static_cast<Eigen::Index>(j)) = 1.0;
  return a;
}

SemiAssignment solve_semi_assignment(const Matrix& cost, std::size_t k_max) {
  if (k_max == 0) throw Error(Error::Code::kInvalidArgument, "k_max must be positive");
  std::vector<std::size_t> capacity(static_cast<std::size_t>(cost.rows()), k_max);
  return solve_semi_assignment(cost, capacity);
}

SemiAssignment solve_semi_assignment(const Matrix& cost, std::span<const std::size_t> capacity) {
  require_finite(cost);
  const auto rows = static_cast<std::size_t>(cost.rows());
  const auto cols = static_cast<std::size_t>(cost.cols());
  if (capacity.size() != rows) throw Error(Error::Code::kDimension, "capacity length does not match cost rows");

  // Replicate each row once per unit of capacity (never more than cols times);
  // the transposed problem assigns every column to a distinct replica slot.
  // Unused slots play the role of the zero-cost dummy columns of the square
  // reduction.
  std::vector<std::size_t> slot_row;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t k = 0; k < std::min(capacity[r], cols); ++k) slot_row.push_back(r);
  if (slot_row.size() < cols) throw Error(Error::Code::kInfeasible, "semi-assignment is infeasible: total row capacity below column count");

  SemiAssignment out;
  out.rows = rows;
  out.row_of_col.assign(cols, 0);
  if (cols == 0) return out;

  // Every column at its own minimum is optimal whenever no row overflows.
  std::vector<std::size_t> load(rows, 0);
  bool fits = true;
  for (std::size_t j = 0; j < cols && fits; ++j) {
    Eigen::Index r = 0;
    cost.col(static_cast<Eigen::Index>(j)).minCoeff(&r);
    out.row_of_col[j] = static_cast<std::size_t>(r);
    fits = ++load[out.row_of_col[j]] <= capacity[out.row_of_col[j]];
  }
  if (fits) {
    for (std::size_t j = 0; j < cols; ++j)
      out.objective += cost(static_cast<Eigen::Index>(out.row_of_col[j]), static_cast<Eigen::Index>(j));
    return out;
  }

  const std::size_t slots = slot_row.size();
  std::vector<double> slot_cost(cols * slots);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t s = 0; s < slots; ++s)
      slot_cost[j * slots + s] = cost(static_cast<Eigen::Index>(slot_row[s]), static_cast<Eigen::Index>(j));
  const std::vector<std::size_t> slot_of_col = solve_dense(slot_cost, cols, slots);
  for (std::size_t j = 0; j < cols; ++j) {
    out.row_of_col[j] = slot_row[slot_of_col[j]];
    out.objective += cost(static_cast<Eigen::Index>(out.row_of_col[j]), static_cast<Eigen::Index>(j));
  }
  return out;
}

}  // namespace mtm
