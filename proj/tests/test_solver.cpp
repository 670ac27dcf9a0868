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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "doctest.h"
#include "solver.hpp"
#include "support.hpp"

using namespace mtm;

namespace {

Matrix two_path() { return testing::path_adjacency(2); }
Matrix three_path() { return testing::path_adjacency(3); }

// Exhaustive minimum of <grad, Q> over one side.
double brute_force_side(const Matrix& grad, std::size_t k) {
  double best = std::numeric_limits<double>::infinity();
  testing::for_each_tuple(static_cast<std::size_t>(grad.cols()), static_cast<std::size_t>(grad.rows()),
                          [&](const std::vector<std::size_t>& rows) {
                            std::vector<std::size_t> load(static_cast<std::size_t>(grad.rows()), 0);
                            double total = 0.0;
                            for (std::size_t j = 0; j < rows.size(); ++j) {
                              if (++load[rows[j]] > k) return;
                              total += grad(static_cast<Eigen::Index>(rows[j]), static_cast<Eigen::Index>(j));
                            }
                            best = std::min(best, total);
                          });
  return best;
}

Matrix permutation_matrix(const std::vector<std::size_t>& col_to_row) {
  const auto n = static_cast<Eigen::Index>(col_to_row.size());
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) p(static_cast<Eigen::Index>(col_to_row[static_cast<std::size_t>(j)]), j) = 1.0;
  return p;
}

// Line instance on two-vertex graphs where phi(a) = (a - 0.3)^2 + 1.
struct QuadraticInstance {
  Graph g = Graph::empty(2);
  Graph h = Graph::empty(2);
  SolverConfig cfg;
  AssignmentPair p;
  AssignmentPair q;
  QuadraticInstance() {
    cfg.k_max = 2;
    cfg.lambda = 1.0;
    cfg.similarity = (Matrix(2, 2) << 1.09, 0.4, 0.0, -0.5).finished();
    p = {(Matrix(2, 2) << 1, 1, 0, 0).finished(), Matrix::Identity(2, 2)};
    q = {Matrix::Identity(2, 2), (Matrix(2, 2) << 1, 1, 0, 0).finished()};
  }
  double phi(double a) const {
    return objective(g, h, (1 - a) * p.p1 + a * q.p1, (1 - a) * p.p2 + a * q.p2, cfg);
  }
};

}  // namespace

TEST_CASE("objective worked examples") {
  const Graph g(two_path());
  const Graph h(three_path());
  const Matrix p1 = Matrix::Identity(2, 2);
  const Matrix p2 = (Matrix(2, 3) << 1, 0, 0, 0, 1, 1).finished();
  CHECK(p2 * h.adjacency() * p2.transpose() == (Matrix(2, 2) << 0, 1, 1, 2).finished());
  SolverConfig cfg;
  CHECK(objective(g, h, p1, p2, cfg) == 4.0);
  cfg.mu = 1.0;
  CHECK(objective(g, h, p1, p2, cfg) == 2.0);

  SolverConfig plain;
  CHECK(objective(h, h, Matrix::Identity(3, 3), Matrix::Identity(3, 3), plain) == 0.0);
}

TEST_CASE("objective matches explicit summation") {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = testing::random_graph(2 + trial % 5, 0.5, rng, trial % 2 == 1, true);
    const Graph h = testing::random_graph(2 + (trial / 2) % 5, 0.5, rng, trial % 2 == 1, true);
    SolverConfig cfg;
    cfg.k_max = 6;
    cfg.lambda = uniform01(rng);
    cfg.mu = uniform01(rng);
    cfg.similarity = testing::random_matrix(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(h.size()), rng);
    const std::size_t k = cluster_rows(g, h);
    const Matrix p1 = testing::random_feasible(k, g.size(), 6, rng);
    const Matrix p2 = testing::random_feasible(k, h.size(), 6, rng);
    const double expected = testing::naive_objective(g.adjacency(), h.adjacency(), p1, p2, cfg.lambda, cfg.mu, &*cfg.similarity);
    CHECK(objective(g, h, p1, p2, cfg) == doctest::Approx(expected).epsilon(1e-12));
    cfg.negate_similarity = true;
    const Matrix neg = -*cfg.similarity;
    CHECK(objective(g, h, p1, p2, cfg) ==
          doctest::Approx(testing::naive_objective(g.adjacency(), h.adjacency(), p1, p2, cfg.lambda, cfg.mu, &neg)).epsilon(1e-12));
  }
}

TEST_CASE("objective errors") {
  const Graph g(two_path());
  const Graph h(three_path());
  SolverConfig cfg;
  CHECK_THROWS_AS(objective(g, h, Matrix::Identity(3, 3), Matrix::Identity(3, 3), cfg), Error);
  cfg.lambda = 0.5;
  const Matrix p2 = (Matrix(2, 3) << 1, 0, 0, 0, 1, 1).finished();
  CHECK_THROWS_AS(objective(g, h, Matrix::Identity(2, 2), p2, cfg), Error);
  cfg.similarity = Matrix::Zero(3, 2);
  CHECK_THROWS_AS(objective(g, h, Matrix::Identity(2, 2), p2, cfg), Error);
}

TEST_CASE("gradient matches central differences") {
  Rng rng(2024);
  const double step = 1e-5;
  for (int trial = 0; trial < 50; ++trial) {
    const bool directed = trial % 3 == 2;
    const Graph g = testing::random_graph(2 + uniform_index(rng, 5), 0.5, rng, directed, trial % 2 == 0);
    const Graph h = testing::random_graph(2 + uniform_index(rng, 5), 0.5, rng, directed, trial % 2 == 0);
    SolverConfig cfg;
    cfg.k_max = 6;
    cfg.lambda = uniform01(rng);
    cfg.mu = uniform01(rng);
    cfg.similarity = testing::random_matrix(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(h.size()), rng);
    const std::size_t k = cluster_rows(g, h);
    Matrix p1 = testing::random_feasible(k, g.size(), 6, rng);
    Matrix p2 = testing::random_feasible(k, h.size(), 6, rng);
    const AssignmentPair grad = gradient(g, h, p1, p2, cfg);
    auto check = [&](Matrix& p, const Matrix& analytic) {
      for (Eigen::Index i = 0; i < p.rows(); ++i) {
        for (Eigen::Index j = 0; j < p.cols(); ++j) {
          const double keep = p(i, j);
          p(i, j) = keep + step;
          const double up = objective(g, h, p1, p2, cfg);
          p(i, j) = keep - step;
          const double down = objective(g, h, p1, p2, cfg);
          p(i, j) = keep;
          const double fd = (up - down) / (2.0 * step);
          const double scale = std::max({1.0, std::abs(fd), std::abs(analytic(i, j))});
          CHECK(std::abs(fd - analytic(i, j)) / scale < 1e-6);
        }
      }
    };
    check(p1, grad.p1);
    check(p2, grad.p2);
  }
}

TEST_CASE("gradient special cases") {
  const Graph h(three_path());
  SolverConfig cfg;
  const AssignmentPair zero = gradient(h, h, Matrix::Identity(3, 3), Matrix::Identity(3, 3), cfg);
  CHECK(zero.p1.isZero(0.0));
  CHECK(zero.p2.isZero(0.0));

  Rng rng(1);
  const Graph g = testing::random_graph(4, 0.6, rng);
  const Graph h2 = testing::random_graph(5, 0.6, rng);
  cfg.k_max = 2;
  cfg.lambda = 1.0;
  cfg.similarity = testing::random_matrix(4, 5, rng);
  const Matrix p1 = testing::random_feasible(4, 4, 2, rng);
  const Matrix p2 = testing::random_feasible(4, 5, 2, rng);
  const AssignmentPair grad = gradient(g, h2, p1, p2, cfg);
  CHECK((grad.p1 - p2 * cfg.similarity->transpose()).isZero(1e-14));
  CHECK((grad.p2 - p1 * *cfg.similarity).isZero(1e-14));
}

TEST_CASE("direction oracle") {
  SolverConfig cfg;
  cfg.k_max = 2;
  const AssignmentPair flat = fw_direction(Matrix::Zero(3, 4), Matrix::Zero(3, 3), cfg);
  CHECK(flat.p1 == fw_direction(Matrix::Zero(3, 4), Matrix::Zero(3, 3), cfg).p1);
  CHECK(is_feasible(flat, cfg, 0.0));

  const Matrix strict = (Matrix(3, 3) << 0, 5, 5, 5, 0, 5, 5, 5, 0).finished();
  cfg.k_max = 3;
  CHECK(fw_direction(strict, strict, cfg).p1 == Matrix::Identity(3, 3));

  cfg.k_max = 2;
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix g1 = testing::random_matrix(3, 4, rng);
    const Matrix g2 = testing::random_matrix(3, 4, rng);
    const AssignmentPair q = fw_direction(g1, g2, cfg);
    CHECK(is_feasible(q, cfg, 0.0));
    const double value = g1.cwiseProduct(q.p1).sum() + g2.cwiseProduct(q.p2).sum();
    CHECK(value == doctest::Approx(brute_force_side(g1, 2) + brute_force_side(g2, 2)).epsilon(1e-12));
  }
}

TEST_CASE("direction oracle honours pins") {
  SolverConfig cfg;
  cfg.k_max = 1;
  cfg.pinned = {{Side::kG, 0, 2}, {Side::kH, 1, 0}};
  const Matrix grad = Matrix::Zero(3, 3);
  const AssignmentPair q = fw_direction(grad, grad, cfg);
  CHECK(q.p1(2, 0) == 1.0);
  CHECK(q.p2(0, 1) == 1.0);
  CHECK(is_feasible(q, cfg, 0.0));
  cfg.pinned.push_back({Side::kG, 1, 2});
  CHECK_THROWS_AS(fw_direction(grad, grad, cfg), Error);
}

TEST_CASE("quartic interpolation") {
  const LineSearchResult r = line_search([](double a) { return (a - 0.3) * (a - 0.3) + 1.0; });
  CHECK(std::abs(r.alpha - 0.3) < 1e-9);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(r.stalled);

  const LineSearchResult flat = line_search([](double) { return 2.0; });
  CHECK(flat.stalled);
  CHECK(flat.alpha == 0.0);

  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    std::array<double, 5> c{};
    for (double& v : c) v = 4.0 * uniform01(rng) - 2.0;
    const auto poly = [&](double a) { return (((c[4] * a + c[3]) * a + c[2]) * a + c[1]) * a + c[0]; };
    const LineSearchResult fit = line_search(poly);
    for (std::size_t k = 0; k < 5; ++k) CHECK(fit.coeffs[k] == doctest::Approx(c[k]).epsilon(1e-9));
    for (int s = 0; s <= 10000; ++s) CHECK(poly(fit.alpha) <= poly(s * 1e-4) + 1e-9);
  }
}

TEST_CASE("line search on a quadratic instance") {
  const QuadraticInstance inst;
  CHECK(inst.phi(0.0) == doctest::Approx(1.09).epsilon(1e-14));
  CHECK(inst.phi(1.0) == doctest::Approx(1.49).epsilon(1e-14));
  double grid_best = 0.0;
  double grid_value = inst.phi(0.0);
  for (int s = 1; s <= 1000000; ++s) {
    const double a = s * 1e-6;
    const double v = (a - 0.3) * (a - 0.3) + 1.0;
    if (v < grid_value) {
      grid_value = v;
      grid_best = a;
    }
  }
  const LineSearchResult r = line_search(inst.g, inst.h, inst.p, inst.q, inst.cfg);
  CHECK(std::abs(r.alpha - 0.3) < 1e-9);
  CHECK(std::abs(r.alpha - grid_best) <= 1e-6);
  CHECK(inst.phi(r.alpha) <= inst.phi(grid_best) + 1e-12);
}

TEST_CASE("line search optimality on random instances") {
  Rng rng(55);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = testing::random_graph(3 + trial % 4, 0.5, rng);
    const Graph h = testing::random_graph(3 + (trial + 1) % 4, 0.5, rng);
    SolverConfig cfg;
    cfg.k_max = 3;
    cfg.mu = trial % 2 ? 0.5 : 0.0;
    const std::size_t k = cluster_rows(g, h);
    const AssignmentPair p{testing::random_feasible(k, g.size(), 3, rng), testing::random_feasible(k, h.size(), 3, rng)};
    const AssignmentPair grad = gradient(g, h, p.p1, p.p2, cfg);
    const AssignmentPair q = fw_direction(grad.p1, grad.p2, cfg);
    const LineSearchResult r = line_search(g, h, p, q, cfg);
    auto phi = [&](double a) { return objective(g, h, (1 - a) * p.p1 + a * q.p1, (1 - a) * p.p2 + a * q.p2, cfg); };
    const double at = phi(r.alpha);
    CHECK(at <= std::min(phi(0.0), phi(1.0)) + 1e-9);
    for (int s = 0; s <= 10000; ++s) CHECK(at <= phi(s * 1e-4) + 1e-9);
  }
  const Graph g(three_path());
  SolverConfig cfg;
  const AssignmentPair p = initialize(3, 3, cfg);
  const LineSearchResult same = line_search(g, g, p, p, cfg);
  CHECK(same.stalled);
  CHECK(same.alpha == 0.0);
}

TEST_CASE("initialisation") {
  SolverConfig cfg;
  const AssignmentPair sq = initialize(3, 3, cfg);
  CHECK(sq.p1.isApprox(Matrix::Constant(3, 3, 1.0 / 3.0)));
  CHECK(sq.p2 == Matrix::Identity(3, 3));

  const AssignmentPair rect = initialize(2, 4, cfg);
  CHECK(rect.p1 == Matrix::Constant(2, 2, 0.5));
  CHECK(rect.p2 == (Matrix(2, 4) << 1, 0, 1, 0, 0, 1, 0, 1).finished());

  for (std::size_t ng = 1; ng <= 6; ++ng)
    for (std::size_t nh = 1; nh <= 6; ++nh) {
      cfg.k_max = (std::max(ng, nh) + std::min(ng, nh) - 1) / std::min(ng, nh);
      const AssignmentPair p = initialize(ng, nh, cfg);
      CHECK(is_feasible(p, cfg, 1e-12));
    }
  cfg.k_max = 2;
  CHECK_THROWS_AS(initialize(2, 5, cfg), Error);
}

TEST_CASE("relaxed solve on identical paths") {
  const Graph g(three_path());
  SolverConfig cfg;
  cfg.k_max = 1;
  const SolveTrace t = solve_relaxed(g, g, cfg);
  CHECK(t.final_objective() <= 1e-6);
  CHECK(t.monotone_violations() == 0);

  cfg.epsilon = std::numeric_limits<double>::infinity();
  const SolveTrace once = solve_relaxed(g, g, cfg);
  CHECK(once.iterations.size() == 1);
}

TEST_CASE("relaxed solve invariants") {
  Rng rng(404);
  for (int trial = 0; trial < 60; ++trial) {
    const Graph g = testing::random_graph(3 + uniform_index(rng, 8), 0.3, rng, trial % 5 == 4);
    const Graph h = testing::random_graph(3 + uniform_index(rng, 8), 0.3, rng, trial % 5 == 4);
    SolverConfig cfg;
    cfg.k_max = (std::max(g.size(), h.size()) + std::min(g.size(), h.size()) - 1) / std::min(g.size(), h.size()) + trial % 2;
    cfg.mu = trial % 3 == 0 ? 0.3 : 0.0;
    if (trial % 4 == 1) {
      cfg.lambda = 0.2;
      cfg.similarity = testing::random_matrix(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(h.size()), rng);
    }
    cfg.max_iters = 200;
    const SolveTrace t = solve_relaxed(g, g.size() == h.size() && trial % 7 == 0 ? g : h, cfg);
    CHECK(t.monotone_violations(1e-12) == 0);
    CHECK(is_feasible(t.solution, cfg, 1e-10));
    CHECK(t.solution.p1.minCoeff() >= -1e-12);
    CHECK(t.solution.p2.maxCoeff() <= 1.0 + 1e-12);
    for (const auto& it : t.iterations) {
      CHECK(it.gap >= -1e-10);
      CHECK(it.step >= 0.0);
      CHECK(it.step <= 1.0);
    }
    CHECK(!t.iterations.empty());
  }
}

TEST_CASE("relaxed solve keeps pinned columns") {
  Rng rng(12);
  const Graph g = testing::random_graph(5, 0.5, rng);
  const Graph h = testing::random_graph(6, 0.5, rng);
  SolverConfig cfg;
  cfg.pinned = {{Side::kG, 0, 1}, {Side::kH, 3, 1}, {Side::kH, 5, 4}};
  const SolveTrace t = solve_relaxed(g, h, cfg);
  CHECK(is_feasible(t.solution, cfg, 1e-10));
  CHECK(t.solution.p1(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.solution.p2(4, 5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.monotone_violations() == 0);
}

TEST_CASE("binary one-to-one case reduces to the permutation objective") {
  std::vector<std::size_t> perm(4);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Matrix> perms;
  do perms.push_back(permutation_matrix(perm));
  while (std::next_permutation(perm.begin(), perm.end()));

  SolverConfig cfg;
  cfg.k_max = 1;
  Rng rng(6);
  for (int code = 0; code < 64; ++code) {
    Matrix a = Matrix::Zero(4, 4);
    int bit = 0;
    for (Eigen::Index i = 0; i < 4; ++i)
      for (Eigen::Index j = i + 1; j < 4; ++j, ++bit)
        if (code >> bit & 1) a(i, j) = a(j, i) = 1.0;
    const Graph g(a);
    const Graph h = testing::random_graph(4, 0.5, rng);
    for (int s = 0; s < 40; ++s) {
      const Matrix& p1 = perms[uniform_index(rng, perms.size())];
      const Matrix& p2 = perms[uniform_index(rng, perms.size())];
      const Matrix p = p1.transpose() * p2;
      const double expected = (g.adjacency() - p * h.adjacency() * p.transpose()).squaredNorm();
      CHECK(objective(g, h, p1, p2, cfg) == expected);
    }
  }
}

TEST_CASE("coordinate similarity") {
  const Graph g = Graph::empty(2).with_coords({{0, 0}, {1, 1}});
  const Graph h = Graph::empty(1).with_coords({{1, 0}});
  const Matrix c = coordinate_similarity(g, h);
  CHECK(c(0, 0) == doctest::Approx(std::exp(-1.0)));
  CHECK(c(1, 0) == doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(coordinate_similarity(Graph::empty(2), h), Error);
}
