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
#include <limits>
#include <numeric>

#include "doctest.h"
#include "matching.hpp"
#include "projection.hpp"
#include "support.hpp"

using namespace mtm;

namespace {

// Enumerates every row choice per vertex on both sides.
double enumerate_optimum(const Graph& g, const Graph& h, std::size_t k) {
  const std::size_t rows = std::min(g.size(), h.size());
  const std::size_t ng = g.size();
  double best = std::numeric_limits<double>::infinity();
  testing::for_each_tuple(ng + h.size(), rows, [&](const std::vector<std::size_t>& t) {
    std::vector<std::size_t> load_g(rows, 0), load_h(rows, 0);
    Matrix p1 = Matrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(ng));
    Matrix p2 = Matrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(h.size()));
    for (std::size_t v = 0; v < t.size(); ++v) {
      if (v < ng) {
        if (++load_g[t[v]] > k) return;
        p1(static_cast<Eigen::Index>(t[v]), static_cast<Eigen::Index>(v)) = 1.0;
      } else {
        if (++load_h[t[v]] > k) return;
        p2(static_cast<Eigen::Index>(t[v]), static_cast<Eigen::Index>(v - ng)) = 1.0;
      }
    }
    best = std::min(best, testing::naive_objective(g.adjacency(), h.adjacency(), p1, p2, 0.0, 0.0, nullptr));
  });
  return best;
}

double permutation_optimum(const Graph& g, const Graph& h) {
  std::vector<std::size_t> perm(g.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double f = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double d = g.weight(i, j) - h.weight(perm[i], perm[j]);
        f += d * d;
      }
    best = std::min(best, f);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

void check_feasible(const Matching& m, const Graph& g, const Graph& h, std::size_t k) {
  CHECK_NOTHROW(validate_matching(m, g.size(), h.size(), k));
}

}  // namespace

TEST_CASE("column similarity") {
  const Matrix p1 = (Matrix(2, 3) << 1, 0, 1, 0, 1, 0).finished();
  const Matrix p2 = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  const Matrix s = column_similarity(p1, p2);
  REQUIRE(s.rows() == 5);
  CHECK(s(0, 2) == 1.0);
  CHECK(s(0, 1) == 0.0);
  CHECK(s(1, 3) == 1.0);
  CHECK(s(0, 4) == 1.0);
  CHECK(s.diagonal() == Eigen::VectorXd::Ones(5));

  const Matrix uniform = Matrix::Constant(4, 4, 0.25);
  const Matrix su = column_similarity(uniform, Matrix::Identity(4, 4));
  CHECK(su(0, 1) == doctest::Approx(0.25));

  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = testing::random_feasible(3, 5, 5, rng);
    const Matrix b = testing::random_feasible(3, 4, 4, rng);
    const Matrix out = column_similarity(a, b);
    for (Eigen::Index i = 0; i < 9; ++i)
      for (Eigen::Index j = 0; j < 9; ++j) {
        double dot = 0.0;
        for (Eigen::Index r = 0; r < 3; ++r) dot += (i < 5 ? a(r, i) : b(r, i - 5)) * (j < 5 ? a(r, j) : b(r, j - 5));
        CHECK(std::abs(out(i, j) - dot) <= 1e-12);
      }
  }
  CHECK_THROWS_AS(column_similarity(Matrix::Zero(2, 2), Matrix::Zero(3, 2)), Error);
}

TEST_CASE("clustering projection of a binary pair recovers its rows") {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = testing::random_graph(6, 0.4, rng);
    const Graph h = testing::random_graph(7, 0.4, rng);
    SolverConfig cfg;
    cfg.k_max = 2;
    std::vector<std::size_t> slots;
    for (std::size_t r = 0; r < 6; ++r) slots.insert(slots.end(), {r, r});
    std::shuffle(slots.begin(), slots.end(), rng);
    AssignmentPair p{Matrix::Zero(6, 6), Matrix::Zero(6, 7)};
    for (std::size_t v = 0; v < 6; ++v) p.p1(static_cast<Eigen::Index>(slots[v]), static_cast<Eigen::Index>(v)) = 1.0;
    std::shuffle(slots.begin(), slots.end(), rng);
    for (std::size_t v = 0; v < 7; ++v) p.p2(static_cast<Eigen::Index>(slots[v]), static_cast<Eigen::Index>(v)) = 1.0;
    const Matching expected = canonical(from_assignment(p));
    const Matching got = canonical(project_by_clustering(g, h, p, cfg));
    CHECK(got.clusters == expected.clusters);
    CHECK(got.objective == doctest::Approx(objective(g, h, p.p1, p.p2, cfg)).epsilon(1e-12));
  }
}

TEST_CASE("clustering projection on identical graphs") {
  Rng rng(8);
  int uniform_exact = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = testing::random_graph(7, 0.4, rng);
    SolverConfig cfg;
    cfg.init = Init::kCustom;
    cfg.init_p1 = 0.8 * Matrix::Identity(7, 7) + Matrix::Constant(7, 7, 0.2 / 7.0);
    cfg.init_p2 = Matrix::Identity(7, 7);
    const SolveTrace t = solve_relaxed(g, g, cfg);
    REQUIRE(t.final_objective() < 1e-3);
    CHECK(project_by_clustering(g, g, t.solution, cfg).objective == 0.0);

    SolverConfig plain;
    uniform_exact += project_by_clustering(g, g, solve_relaxed(g, g, plain).solution, plain).objective == 0.0;
  }
  MESSAGE("from the uniform start, clustering recovered F = 0 on " << uniform_exact << " of 20");
}

TEST_CASE("unit cap forces a bijection") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = testing::random_graph(3, 0.5, rng);
    const Graph h = testing::random_graph(3, 0.5, rng);
    SolverConfig cfg;
    cfg.k_max = 1;
    const SolveTrace t = solve_relaxed(g, h, cfg);
    for (const Matching& m : {project_by_clustering(g, h, t.solution, cfg), project_incremental(g, h, cfg).matching}) {
      REQUIRE(m.clusters.size() == 3);
      for (const Cluster& c : m.clusters) {
        CHECK(c.g.size() == 1);
        CHECK(c.h.size() == 1);
      }
    }
  }
}

TEST_CASE("cap repair") {
  Matrix points = Matrix::Zero(2, 6);
  points(0, 2) = 3.0;
  points(0, 5) = 3.0;
  const std::vector<std::size_t> labels{0, 0, 0, 0, 0, 0};
  const auto clusters = repair_caps(points, labels, 3, 2, 3);
  Matching m{clusters, 0.0};
  CHECK_NOTHROW(validate_matching(m, 3, 3, 2));
}

TEST_CASE("brute force worked examples") {
  SolverConfig cfg;
  cfg.k_max = 1;
  Matrix k3 = Matrix::Ones(3, 3) - Matrix::Identity(3, 3);
  CHECK(brute_force_optimum(Graph::empty(3), Graph(k3), cfg).objective == 6.0);

  cfg.k_max = 2;
  const Graph edge(testing::path_adjacency(2));
  CHECK(brute_force_optimum(edge, edge, cfg).objective == 0.0);

  Rng rng(5);
  const Graph g = testing::random_graph(5, 0.5, rng);
  std::vector<std::size_t> perm{3, 0, 4, 1, 2};
  CHECK(brute_force_optimum(g, permute(g, perm), cfg).objective == 0.0);

  CHECK_THROWS_AS(brute_force_optimum(Graph::empty(7), Graph::empty(3), cfg), Error);
}

TEST_CASE("brute force agrees with an independent enumeration") {
  Rng rng(71);
  for (int trial = 0; trial < 25; ++trial) {
    const Graph g = testing::random_graph(2 + uniform_index(rng, 3), 0.5, rng, trial % 4 == 3);
    const Graph h = testing::random_graph(2 + uniform_index(rng, 3), 0.5, rng, trial % 4 == 3);
    SolverConfig cfg;
    cfg.k_max = 2;
    CHECK(brute_force_optimum(g, h, cfg).objective == doctest::Approx(enumerate_optimum(g, h, 2)).epsilon(1e-12));
  }
}

TEST_CASE("incremental projection worked examples") {
  SolverConfig cfg;
  const Graph p3(testing::path_adjacency(3));
  const Matching same = project_incremental(p3, p3, cfg).matching;
  CHECK(same.objective == 0.0);

  const Graph p2(testing::path_adjacency(2));
  cfg.k_max = 2;
  const Matching m = project_incremental(p2, p3, cfg).matching;
  const Matching opt = brute_force_optimum(p2, p3, cfg);
  CHECK(m.objective == opt.objective);
  CHECK(enumerate_optimum(p2, p3, 2) == opt.objective);
  bool merged_adjacent = false;
  for (const Cluster& c : m.clusters)
    if (c.h.size() == 2) merged_adjacent = p3.weight(c.h[0], c.h[1]) == 1.0;
  CHECK(merged_adjacent);
}

TEST_CASE("incremental projection with unit cap against permutations") {
  Rng rng(90);
  int equal = 0;
  const int trials = 60;
  for (int trial = 0; trial < trials; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 4);
    const Graph g = testing::random_graph(n, 0.5, rng);
    const Graph h = testing::random_graph(n, 0.5, rng);
    SolverConfig cfg;
    cfg.k_max = 1;
    const Matching m = project_incremental(g, h, cfg).matching;
    for (const Cluster& c : m.clusters) {
      CHECK(c.g.size() == 1);
      CHECK(c.h.size() == 1);
    }
    const double best = permutation_optimum(g, h);
    CHECK(m.objective >= best - 1e-12);
    equal += m.objective <= best + 1e-12;
  }
  MESSAGE("incremental matched the permutation optimum on " << equal << " of " << trials);
  CHECK(equal * 10 >= trials * 6);
}

TEST_CASE("projections against the optimum and each other") {
  Rng rng(123);
  int incremental_wins = 0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    const Graph g = testing::random_graph(3 + uniform_index(rng, 4), 0.4, rng);
    const Graph h = testing::random_graph(3 + uniform_index(rng, 4), 0.4, rng);
    SolverConfig cfg;
    cfg.k_max = 2;
    cfg.seed = static_cast<std::uint64_t>(trial);
    const IncrementalResult inc = project_incremental(g, h, cfg);
    const SolveTrace t = solve_relaxed(g, h, cfg);
    const Matching clu = project_by_clustering(g, h, t.solution, cfg);
    const double opt = brute_force_optimum(g, h, cfg).objective;
    check_feasible(inc.matching, g, h, 2);
    check_feasible(clu, g, h, 2);
    CHECK(inc.matching.objective >= opt - 1e-12);
    CHECK(clu.objective >= opt - 1e-12);
    CHECK(inc.matching.objective == doctest::Approx(evaluate(inc.matching, g, h, cfg)).epsilon(1e-12));
    for (const SolveTrace& s : inc.traces) CHECK(s.monotone_violations() == 0);
    incremental_wins += inc.matching.objective <= clu.objective;
  }
  MESSAGE("incremental <= clustering on " << incremental_wins << " of " << trials);
  CHECK(incremental_wins * 2 >= trials);
}

TEST_CASE("projections are deterministic") {
  Rng rng(1);
  const Graph g = testing::random_graph(9, 0.3, rng);
  const Graph h = testing::random_graph(10, 0.3, rng);
  SolverConfig cfg;
  cfg.seed = 7;
  const Matching a = project_incremental(g, h, cfg).matching;
  const Matching b = project_incremental(g, h, cfg).matching;
  CHECK(a.clusters == b.clusters);
  CHECK(a.objective == b.objective);
  const SolveTrace t = solve_relaxed(g, h, cfg);
  CHECK(project_by_clustering(g, h, t.solution, cfg).clusters == project_by_clustering(g, h, t.solution, cfg).clusters);
}

TEST_CASE("matching text round trip") {
  Matching m{{{{0, 2}, {1}}, {{1}, {}}, {{}, {0, 2}}}, 1.5};
  const Matching back = parse_matching(format_matching(m));
  CHECK(back.clusters == m.clusters);
  CHECK(back.objective == 1.5);
  CHECK_THROWS_AS(parse_matching("cluster 0 | G: x | H: 1\nobjective 0\n"), Error);
  CHECK_THROWS_AS(validate_matching(m, 3, 3, 1), Error);
  CHECK_NOTHROW(validate_matching(m, 3, 3, 2));
  CHECK_THROWS_AS(validate_matching(m, 4, 3, 2), Error);
}
