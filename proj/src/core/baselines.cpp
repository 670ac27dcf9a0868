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

#include "baselines.hpp"

#include <algorithm>
#include <numeric>

#include "kmeans.hpp"
#include "projection.hpp"

namespace mtm {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

// Leading eigenvectors as rows of per-vertex coordinates.
Matrix spectral_coordinates(const Graph& graph, std::size_t count) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(graph.adjacency());
  if (solver.info() != Eigen::Success) throw Error(Error::Code::kInvalidArgument, "eigendecomposition failed");
  const Index n = idx(graph.size());
  Matrix coords(n, idx(count));
  for (std::size_t k = 0; k < count; ++k) {
    // Eigenvalues come back ascending.
    Eigen::VectorXd v = solver.eigenvectors().col(n - 1 - idx(k));
    const double top = v.cwiseAbs().maxCoeff();
    bool has_pos = false, has_neg = false;
    for (Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) < top - 1e-9) continue;
      (v(i) > 0.0 ? has_pos : has_neg) = true;
    }
    if (has_neg && !has_pos) v = -v;
    // Largest entries of both signs: fall back to the third moment.
    else if (has_pos && has_neg && v.array().cube().sum() < 0.0) v = -v;
    coords.col(idx(k)) = v;
  }
  for (Index i = 0; i < n; ++i) {
    const double norm = coords.row(i).norm();
    if (norm > 1e-9) coords.row(i) /= norm;
    else coords.row(i).setZero();
  }
  // Snap away eigensolver round-off so equivalent vertices coincide exactly.
  return (coords.array() * 1e9).round() / 1e9;
}

// Vertex order by coordinates, then by closed-walk counts of length 2..4 when
// coordinates coincide.
std::vector<std::size_t> coordinate_order(const Graph& graph, const Matrix& coords) {
  const std::size_t n = graph.size();
  auto tied = [&](std::size_t a, std::size_t b) { return coords.row(idx(a)) == coords.row(idx(b)); };
  bool any_tie = false;
  for (std::size_t a = 0; a < n && !any_tie; ++a)
    for (std::size_t b = a + 1; b < n && !any_tie; ++b) any_tie = tied(a, b);
  Matrix walks(idx(n), 0);
  if (any_tie) {
    walks.resize(idx(n), 3);
    Matrix power = graph.adjacency();
    for (Index k = 0; k < 3; ++k) {
      power = power * graph.adjacency();
      walks.col(k) = power.diagonal();
    }
    walks = (walks.array() * 1e6).round() / 1e6;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    for (Index c = 0; c < coords.cols(); ++c)
      if (coords(idx(a), c) != coords(idx(b), c)) return coords(idx(a), c) < coords(idx(b), c);
    for (Index c = 0; c < walks.cols(); ++c)
      if (walks(idx(a), c) != walks(idx(b), c)) return walks(idx(a), c) < walks(idx(b), c);
    return false;
  });
  return order;
}

}  // namespace

Matching spectral_match(const Graph& g, const Graph& h, const SpectralConfig& spec, const SolverConfig& cfg) {
  validate_problem(g, h, cfg);
  if (g.adjacency() != g.adjacency().transpose() || h.adjacency() != h.adjacency().transpose())
    throw Error(Error::Code::kInvalidArgument, "spectral matching needs symmetric adjacency matrices");
  const std::size_t nk = cluster_rows(g, h);
  if (spec.num_eigenvectors == 0 || spec.num_eigenvectors > nk)
    throw Error(Error::Code::kInvalidArgument, "num_eigenvectors must lie in [1, min(N_G, N_H)]");
  const std::size_t k = spec.clusters.value_or(nk);
  if (k == 0) throw Error(Error::Code::kInvalidArgument, "cluster count must be positive");

  const Matrix cg = spectral_coordinates(g, spec.num_eigenvectors);
  const Matrix ch = spectral_coordinates(h, spec.num_eigenvectors);
  // Cluster in coordinate order so the result does not depend on how either
  // graph's vertices are numbered.
  const std::vector<std::size_t> order_g = coordinate_order(g, cg);
  const std::vector<std::size_t> order_h = coordinate_order(h, ch);
  const std::size_t total = g.size() + h.size();
  Matrix points(idx(spec.num_eigenvectors), idx(total));
  for (std::size_t i = 0; i < g.size(); ++i) points.col(idx(i)) = cg.row(idx(order_g[i])).transpose();
  for (std::size_t i = 0; i < h.size(); ++i) points.col(idx(g.size() + i)) = ch.row(idx(order_h[i])).transpose();

  KMeansOptions opts;
  opts.seed = cfg.seed;
  const KMeansResult km = kmeans(points, k, opts);

  Matching m;
  m.clusters = repair_caps(points, km.labels, g.size(), cfg.k_max, nk);
  for (Cluster& c : m.clusters) {
    for (std::size_t& v : c.g) v = order_g[v];
    for (std::size_t& v : c.h) v = order_h[v];
    std::sort(c.g.begin(), c.g.end());
    std::sort(c.h.begin(), c.h.end());
  }
  m.objective = evaluate(m, g, h, cfg);
  return m;
}

namespace {

constexpr int kUnset = -1;

struct BeamState {
  std::vector<int> row_g;  // cluster of each G vertex, kUnset if not yet placed
  std::vector<int> row_h;
  std::vector<int> count_g;  // per cluster
  std::vector<int> count_h;
  int clusters = 0;
  double penalty = 0.0;  // accumulated operation costs
  double cost = 0.0;
};

class BeamSearch {
 public:
  BeamSearch(const Graph& g, const Graph& h, const BeamConfig& beam, const SolverConfig& cfg)
      : g_(g), h_(h), beam_(beam), cfg_(cfg), rows_(static_cast<int>(cluster_rows(g, h))),
        kmax_(static_cast<int>(cfg.k_max)) {
    if (cfg.similarity) {
      c_ = *cfg.similarity;
      if (cfg.negate_similarity) c_ = -c_;
    }
    order_g_ = by_degree(g);
    order_h_ = by_degree(h);
  }

  Matching run() {
    BeamState root;
    root.row_g.assign(g_.size(), kUnset);
    root.row_h.assign(h_.size(), kUnset);
    root.count_g.assign(static_cast<std::size_t>(rows_), 0);
    root.count_h.assign(static_cast<std::size_t>(rows_), 0);
    std::vector<BeamState> beam{root};

    for (std::size_t v : order_g_) {
      std::vector<BeamState> next;
      for (const BeamState& s : beam) expand_g(s, v, next);
      beam = prune(std::move(next));
    }
    for (std::size_t v : order_h_) {
      std::vector<BeamState> next;
      for (const BeamState& s : beam) {
        if (s.row_h[v] != kUnset) next.push_back(s);
        else expand_h(s, v, next);
      }
      beam = prune(std::move(next));
    }

    const BeamState& best = beam.front();
    Matching m;
    m.clusters.resize(static_cast<std::size_t>(best.clusters));
    for (std::size_t v = 0; v < g_.size(); ++v) m.clusters[static_cast<std::size_t>(best.row_g[v])].g.push_back(v);
    for (std::size_t v = 0; v < h_.size(); ++v) m.clusters[static_cast<std::size_t>(best.row_h[v])].h.push_back(v);
    m.objective = evaluate(m, g_, h_, cfg_);
    return m;
  }

 private:
  static std::vector<std::size_t> by_degree(const Graph& graph) {
    const auto deg = graph.degrees();
    std::vector<std::size_t> order(graph.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return deg[a] > deg[b]; });
    return order;
  }

  void expand_g(const BeamState& s, std::size_t v, std::vector<BeamState>& out) const {
    for (int c = 0; c < s.clusters; ++c) {
      if (s.count_g[static_cast<std::size_t>(c)] >= kmax_) continue;
      BeamState t = s;
      place_g(t, v, c);
      t.penalty += beam_.merge_cost;
      finish(t, out);
    }
    if (s.clusters >= rows_) return;
    for (std::size_t u : order_h_) {
      if (s.row_h[u] != kUnset) continue;
      BeamState t = s;
      const int c = t.clusters++;
      place_g(t, v, c);
      place_h(t, u, c);
      t.penalty += beam_.match_cost;
      finish(t, out);
    }
    BeamState t = s;
    place_g(t, v, t.clusters++);
    finish(t, out);
  }

  void expand_h(const BeamState& s, std::size_t v, std::vector<BeamState>& out) const {
    for (int c = 0; c < s.clusters; ++c) {
      if (s.count_h[static_cast<std::size_t>(c)] >= kmax_) continue;
      BeamState t = s;
      place_h(t, v, c);
      if (s.count_h[static_cast<std::size_t>(c)] > 0) t.penalty += beam_.merge_cost;
      finish(t, out);
    }
    if (s.clusters >= rows_) return;
    BeamState t = s;
    place_h(t, v, t.clusters++);
    finish(t, out);
  }

  static void place_g(BeamState& s, std::size_t v, int c) {
    s.row_g[v] = c;
    ++s.count_g[static_cast<std::size_t>(c)];
  }
  static void place_h(BeamState& s, std::size_t v, int c) {
    s.row_h[v] = c;
    ++s.count_h[static_cast<std::size_t>(c)];
  }

  void finish(BeamState& s, std::vector<BeamState>& out) const {
    s.cost = restricted_objective(s) + s.penalty;
    out.push_back(std::move(s));
  }

  // Objective of the partial matching on the subgraphs of placed vertices.
  double restricted_objective(const BeamState& s) const {
    const auto k = static_cast<std::size_t>(std::max(s.clusters, 1));
    std::vector<double> diff(k * k, 0.0);
    double merged = 0.0;
    for (std::size_t i = 0; i < g_.size(); ++i) {
      if (s.row_g[i] == kUnset) continue;
      for (std::size_t j = 0; j < g_.size(); ++j) {
        if (s.row_g[j] == kUnset) continue;
        const double w = g_.weight(i, j);
        if (w == 0.0) continue;
        diff[static_cast<std::size_t>(s.row_g[i]) * k + static_cast<std::size_t>(s.row_g[j])] += w;
        if (s.row_g[i] == s.row_g[j]) merged += w;
      }
    }
    for (std::size_t i = 0; i < h_.size(); ++i) {
      if (s.row_h[i] == kUnset) continue;
      for (std::size_t j = 0; j < h_.size(); ++j) {
        if (s.row_h[j] == kUnset) continue;
        const double w = h_.weight(i, j);
        if (w == 0.0) continue;
        diff[static_cast<std::size_t>(s.row_h[i]) * k + static_cast<std::size_t>(s.row_h[j])] -= w;
        if (s.row_h[i] == s.row_h[j]) merged += w;
      }
    }
    double structural = 0.0;
    for (double d : diff) structural += d * d;
    double value = (1.0 - cfg_.lambda) * structural - cfg_.mu * merged;
    if (cfg_.lambda > 0.0) {
      double local = 0.0;
      for (std::size_t i = 0; i < g_.size(); ++i) {
        if (s.row_g[i] == kUnset) continue;
        for (std::size_t j = 0; j < h_.size(); ++j)
          if (s.row_h[j] == s.row_g[i]) local += c_(idx(i), idx(j));
      }
      value += cfg_.lambda * local;
    }
    return value;
  }

  std::vector<BeamState> prune(std::vector<BeamState> states) const {
    std::stable_sort(states.begin(), states.end(),
                     [](const BeamState& a, const BeamState& b) { return a.cost < b.cost; });
    if (states.size() > beam_.beam_width) states.resize(beam_.beam_width);
    return states;
  }

  const Graph& g_;
  const Graph& h_;
  const BeamConfig& beam_;
  const SolverConfig& cfg_;
  int rows_;
  int kmax_;
  Matrix c_;
  std::vector<std::size_t> order_g_, order_h_;
};

}  // namespace

Matching beam_match(const Graph& g, const Graph& h, const BeamConfig& beam, const SolverConfig& cfg) {
  validate_problem(g, h, cfg);
  if (beam.beam_width == 0) throw Error(Error::Code::kInvalidArgument, "beam width must be at least 1");
  if (cfg.lambda > 0.0 && (!cfg.similarity || cfg.similarity->rows() != idx(g.size()) || cfg.similarity->cols() != idx(h.size())))
    throw Error(Error::Code::kInvalidArgument, "lambda > 0 requires an N_G x N_H similarity matrix");
  if (beam.beam_width == BeamConfig::kUnbounded) return BeamSearch(g, h, beam, cfg).run();
  // Nested widths make the result monotone in beam_width.
  std::optional<Matching> best;
  for (std::size_t w = 1; w <= beam.beam_width; ++w) {
    BeamConfig narrow = beam;
    narrow.beam_width = w;
    Matching m = BeamSearch(g, h, narrow, cfg).run();
    if (!best || m.objective < best->objective) best = std::move(m);
  }
  return *best;
}

}  // namespace mtm
