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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "graph.hpp"
#include "random.hpp"
#include "solver.hpp"

namespace mtm::testing {

inline Matrix path_adjacency(std::size_t n) {
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = 1.0;
    a(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = 1.0;
  }
  return a;
}

inline Graph path_graph(std::size_t n) { return Graph(path_adjacency(n)); }

inline Graph random_graph(std::size_t n, double p, Rng& rng, bool directed = false, bool weighted = false) {
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j || uniform01(rng) >= p) continue;
      const double w = weighted ? 0.5 + uniform01(rng) : 1.0;
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w;
      if (!directed) a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = w;
    }
  }
  return Graph(a, directed);
}

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = lo + (hi - lo) * uniform01(rng);
  return m;
}

/// Random point of the relaxed polytope: columns on the simplex, rows capped.
inline Matrix random_feasible(std::size_t rows, std::size_t cols, std::size_t k_max, Rng& rng) {
  for (;;) {
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t j = 0; j < cols; ++j) {
      double total = 0.0;
      for (std::size_t i = 0; i < rows; ++i) {
        const double v = -std::log(1.0 - uniform01(rng));
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        total += v;
      }
      m.col(static_cast<Eigen::Index>(j)) /= total;
    }
    if ((m.rowwise().sum().array() <= static_cast<double>(k_max)).all()) return m;
  }
}

/// The objective by explicit summation over vertex pairs and cluster rows.
inline double naive_objective(const Matrix& g, const Matrix& h, const Matrix& p1, const Matrix& p2, double lambda,
                              double mu, const Matrix* c) {
  const Eigen::Index k = p1.rows();
  double structural = 0.0;
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      double x = 0.0;
      for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j) x += p1(a, i) * g(i, j) * p1(b, j);
      for (Eigen::Index i = 0; i < h.rows(); ++i)
        for (Eigen::Index j = 0; j < h.cols(); ++j) x -= p2(a, i) * h(i, j) * p2(b, j);
      structural += x * x;
    }
  }
  double linear = 0.0;
  if (c) {
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      for (Eigen::Index j = 0; j < h.rows(); ++j)
        for (Eigen::Index r = 0; r < k; ++r) linear += (*c)(i, j) * p1(r, i) * p2(r, j);
  }
  double merge = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j)
      for (Eigen::Index r = 0; r < k; ++r) merge += g(i, j) * p1(r, i) * p1(r, j);
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = 0; j < h.cols(); ++j)
      for (Eigen::Index r = 0; r < k; ++r) merge += h(i, j) * p2(r, i) * p2(r, j);
  return (1.0 - lambda) * structural + lambda * linear - mu * merge;
}

/// Calls f on every vector in {0..base-1}^len.
template <typename F>
void for_each_tuple(std::size_t len, std::size_t base, F&& f) {
  std::vector<std::size_t> t(len, 0);
  for (;;) {
    f(t);
    std::size_t i = 0;
    while (i < len && ++t[i] == base) t[i++] = 0;
    if (i == len) return;
  }
}

}  // namespace mtm::testing
