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

#include "generator.hpp"

#include <cmath>
#include <numeric>

namespace mtm {

std::size_t noise_toggle_count(const SyntheticConfig& cfg) {
  const double n = static_cast<double>(cfg.n);
  return static_cast<std::size_t>(std::floor(cfg.sigma * cfg.p * n * n));
}

std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[uniform_index(rng, i)]);
  return perm;
}

Graph erdos_renyi(std::size_t n, double p, Rng& rng) {
  const auto m = static_cast<Eigen::Index>(n);
  Matrix adj = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j)
      if (uniform01(rng) < p) adj(i, j) = adj(j, i) = 1.0;
  return Graph(std::move(adj));
}

Graph split_vertex(const Graph& graph, std::size_t v, Rng& rng) {
  if (v >= graph.size()) throw Error(Error::Code::kInvalidArgument, "split target out of range");
  const auto n = static_cast<Eigen::Index>(graph.size());
  const auto vi = static_cast<Eigen::Index>(v);
  Matrix adj = Matrix::Zero(n + 1, n + 1);
  adj.topLeftCorner(n, n) = graph.adjacency();
  for (Eigen::Index u = 0; u < n; ++u) {
    if (u == vi) continue;
    const double out = adj(vi, u);
    const double in = adj(u, vi);
    if (out == 0.0 && in == 0.0) continue;
    if (uniform01(rng) < 0.5) {
      adj(n, u) = out;
      adj(u, n) = in;
      adj(vi, u) = 0.0;
      adj(u, vi) = 0.0;
    }
  }
  // A self-loop stays with the original vertex.
  return Graph(std::move(adj), graph.directed());
}

Graph toggle_edges(const Graph& graph, std::size_t count, Rng& rng) {
  const std::size_t n = graph.size();
  if (count > 0 && n < 2) throw Error(Error::Code::kInvalidArgument, "edge noise needs at least two vertices");
  Matrix adj = graph.adjacency();
  for (std::size_t t = 0; t < count; ++t) {
    const auto i = static_cast<Eigen::Index>(uniform_index(rng, n));
    auto j = static_cast<Eigen::Index>(uniform_index(rng, n - 1));
    if (j >= i) ++j;
    const double w = adj(i, j) != 0.0 ? 0.0 : 1.0;
    adj(i, j) = w;
    if (!graph.directed()) adj(j, i) = w;
  }
  return Graph(std::move(adj), graph.directed());
}

namespace {

// Applies m splits at distinct base vertices, extending origin accordingly.
Graph apply_splits(Graph graph, std::size_t base_n, std::size_t m, std::vector<std::size_t>& origin, Rng& rng) {
  auto targets = random_permutation(base_n, rng);
  for (std::size_t s = 0; s < m; ++s) {
    const std::size_t v = targets[s];
    graph = split_vertex(graph, v, rng);
    origin.push_back(origin[v]);
  }
  return graph;
}

}  // namespace

SyntheticPair generate_pair(const SyntheticConfig& cfg) {
  if (cfg.n < 2) throw Error(Error::Code::kInvalidArgument, "synthetic graphs need n >= 2");
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw Error(Error::Code::kInvalidArgument, "edge probability must lie in [0, 1]");
  if (!(cfg.sigma >= 0.0) || !std::isfinite(cfg.sigma)) throw Error(Error::Code::kInvalidArgument, "noise level must be >= 0");
  if (cfg.m > cfg.n) throw Error(Error::Code::kInvalidArgument, "more splits than base vertices");
  const std::size_t toggles = noise_toggle_count(cfg);
  if (toggles > cfg.n * (cfg.n - 1) / 2)
    throw Error(Error::Code::kInvalidArgument, "noise toggles exceed the number of vertex pairs");

  Rng rng(cfg.seed);
  SyntheticPair out;
  Graph base = erdos_renyi(cfg.n, cfg.p, rng);
  out.base_edges = base.edge_count();
  const auto perm = random_permutation(cfg.n, rng);
  Graph h = permute(base, perm);

  out.origin_g.resize(cfg.n);
  std::iota(out.origin_g.begin(), out.origin_g.end(), std::size_t{0});
  out.origin_h.resize(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) out.origin_h[perm[i]] = i;

  Graph g = apply_splits(std::move(base), cfg.n, cfg.m, out.origin_g, rng);
  h = apply_splits(std::move(h), cfg.n, cfg.m, out.origin_h, rng);

  out.toggles_per_graph = toggles;
  out.g = toggle_edges(g, toggles, rng);
  out.h = toggle_edges(h, toggles, rng);
  return out;
}

}  // namespace mtm
