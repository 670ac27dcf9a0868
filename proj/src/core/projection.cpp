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

#include "projection.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>

#include "kmeans.hpp"

namespace mtm {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

struct RepairCluster {
  Eigen::VectorXd center;
  std::vector<std::size_t> g;
  std::vector<std::size_t> h;
};

}  // namespace

Matrix column_similarity(const Matrix& p1, const Matrix& p2) {
  if (p1.rows() != p2.rows()) throw Error(Error::Code::kDimension, "P1 and P2 must have the same number of rows");
  Matrix cat(p1.rows(), p1.cols() + p2.cols());
  cat << p1, p2;
  return cat.transpose() * cat;
}

std::vector<Cluster> repair_caps(const Matrix& points, const std::vector<std::size_t>& labels, std::size_t n_g,
                                 std::size_t k_max, std::size_t max_clusters) {
  const std::size_t n = static_cast<std::size_t>(points.cols());
  if (labels.size() != n) throw Error(Error::Code::kDimension, "label count does not match point count");
  const std::size_t groups = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;

  std::vector<std::vector<std::size_t>> members(groups);
  for (std::size_t i = 0; i < n; ++i) members[labels[i]].push_back(i);

  std::vector<RepairCluster> out;
  struct Evicted {
    double dist;
    std::size_t point;
  };
  std::vector<Evicted> evicted;
  for (const auto& mem : members) {
    if (mem.empty()) continue;
    RepairCluster c;
    c.center = Eigen::VectorXd::Zero(points.rows());
    for (std::size_t i : mem) c.center += points.col(idx(i));
    c.center /= static_cast<double>(mem.size());
    std::vector<std::pair<double, std::size_t>> gs, hs;
    for (std::size_t i : mem) (i < n_g ? gs : hs).push_back({(points.col(idx(i)) - c.center).norm(), i});
    std::sort(gs.begin(), gs.end());
    std::sort(hs.begin(), hs.end());
    for (std::size_t k = 0; k < gs.size(); ++k) {
      if (k < k_max) c.g.push_back(gs[k].second);
      else evicted.push_back({gs[k].first, gs[k].second});
    }
    for (std::size_t k = 0; k < hs.size(); ++k) {
      if (k < k_max) c.h.push_back(hs[k].second - n_g);
      else evicted.push_back({hs[k].first, hs[k].second});
    }
    out.push_back(std::move(c));
  }

  std::sort(evicted.begin(), evicted.end(), [](const Evicted& a, const Evicted& b) {
    if (a.dist != b.dist) return a.dist > b.dist;
    return a.point < b.point;
  });
  for (const Evicted& e : evicted) {
    const bool is_g = e.point < n_g;
    const auto pt = points.col(idx(e.point));
    // Among equally near clusters prefer the one this side is shortest in.
    auto deficit = [&](std::size_t c) {
      const auto g = static_cast<long>(out[c].g.size()), h = static_cast<long>(out[c].h.size());
      return is_g ? h - g : g - h;
    };
    std::optional<std::size_t> best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < out.size(); ++c) {
      if ((is_g ? out[c].g.size() : out[c].h.size()) >= k_max) continue;
      const double d = (pt - out[c].center).norm();
      if (d < best_dist - 1e-12 || (d <= best_dist + 1e-12 && deficit(c) > deficit(*best))) {
        best_dist = d;
        best = c;
      }
    }
    // Open a new cluster unless a cluster with room is closer than the centroid
    // the point was evicted from, or as close and short of this side.
    const bool can_open = out.size() < max_clusters;
    const bool join = best && (best_dist < e.dist - 1e-12 || (best_dist <= e.dist + 1e-12 && deficit(*best) > 0));
    if (!best || (can_open && !join)) {
      RepairCluster c;
      c.center = pt;
      out.push_back(std::move(c));
      best = out.size() - 1;
    }
    if (is_g) out[*best].g.push_back(e.point);
    else out[*best].h.push_back(e.point - n_g);
  }

  std::vector<Cluster> clusters;
  for (auto& c : out) {
    std::sort(c.g.begin(), c.g.end());
    std::sort(c.h.begin(), c.h.end());
    clusters.push_back({std::move(c.g), std::move(c.h)});
  }
  return clusters;
}

Matching project_by_clustering(const Graph& g, const Graph& h, const AssignmentPair& relaxed, const SolverConfig& cfg) {
  if (relaxed.p1.cols() != idx(g.size()) || relaxed.p2.cols() != idx(h.size()))
    throw Error(Error::Code::kDimension, "relaxed solution does not match graph sizes");
  Matrix points(relaxed.p1.rows(), relaxed.p1.cols() + relaxed.p2.cols());
  points << relaxed.p1, relaxed.p2;
  const std::size_t nk = cluster_rows(g, h);
  KMeansOptions opts;
  opts.seed = cfg.seed;
  const KMeansResult km = kmeans(points, nk, opts);
  Matching m;
  m.clusters = repair_caps(points, km.labels, g.size(), cfg.k_max, nk);
  m.objective = evaluate(m, g, h, cfg);
  return m;
}

IncrementalResult project_incremental(const Graph& g, const Graph& h, const SolverConfig& cfg) {
  validate_problem(g, h, cfg);
  const std::size_t n_g = g.size();
  const std::size_t total = n_g + h.size();
  const std::size_t rows = cluster_rows(g, h);
  constexpr auto kNone = std::numeric_limits<std::size_t>::max();

  struct Group {
    std::size_t row;
    std::size_t count_g = 0;
    std::size_t count_h = 0;
  };
  std::vector<Group> groups;
  std::vector<std::size_t> group_of(total, kNone);
  std::vector<std::size_t> owner(rows, kNone);
  std::size_t pinned = 0;

  SolverConfig local = cfg;
  local.pinned.clear();
  IncrementalResult result;

  auto is_g = [&](std::size_t u) { return u < n_g; };
  auto pin = [&](std::size_t u, std::size_t gi) {
    Group& grp = groups[gi];
    group_of[u] = gi;
    if (is_g(u)) {
      ++grp.count_g;
      local.pinned.push_back({Side::kG, u, grp.row});
    } else {
      ++grp.count_h;
      local.pinned.push_back({Side::kH, u - n_g, grp.row});
    }
    ++pinned;
  };
  auto room = [&](const Group& grp, std::size_t u) {
    return (is_g(u) ? grp.count_g : grp.count_h) < cfg.k_max;
  };
  auto column_value = [](const AssignmentPair& p, std::size_t n_g_, std::size_t r, std::size_t u) {
    return u < n_g_ ? p.p1(idx(r), idx(u)) : p.p2(idx(r), idx(u - n_g_));
  };

  while (pinned < total) {
    SolveTrace trace = solve_relaxed(g, h, local);
    const AssignmentPair sol = trace.solution;
    result.traces.push_back(std::move(trace));
    local.init = Init::kCustom;
    local.init_p1 = sol.p1;
    local.init_p2 = sol.p2;

    const Matrix sim = column_similarity(sol.p1, sol.p2);
    const bool free_row = std::find(owner.begin(), owner.end(), kNone) != owner.end();
    double best = -std::numeric_limits<double>::infinity();
    std::size_t bu = kNone, bv = kNone;
    for (std::size_t u = 0; u < total; ++u) {
      for (std::size_t v = u + 1; v < total; ++v) {
        const bool fu = group_of[u] == kNone, fv = group_of[v] == kNone;
        if (!fu && !fv) continue;
        bool eligible;
        if (fu && fv) eligible = free_row && (is_g(u) != is_g(v) || cfg.k_max >= 2);
        else if (fu) eligible = room(groups[group_of[v]], u);
        else eligible = room(groups[group_of[u]], v);
        if (!eligible) continue;
        const double s = sim(idx(u), idx(v));
        if (s > best) {
          best = s;
          bu = u;
          bv = v;
        }
      }
    }

    if (bu == kNone) {
      // No eligible pair: every remaining vertex takes a free row of its own.
      for (std::size_t u = 0; u < total; ++u) {
        if (group_of[u] != kNone) continue;
        std::size_t row = kNone;
        double score = -1.0;
        for (std::size_t r = 0; r < rows; ++r) {
          if (owner[r] != kNone) continue;
          const double s = column_value(sol, n_g, r, u);
          if (s > score) {
            score = s;
            row = r;
          }
        }
        if (row == kNone) throw Error(Error::Code::kInfeasible, "no free row left for an unpinned vertex");
        owner[row] = groups.size();
        groups.push_back({row});
        pin(u, groups.size() - 1);
      }
      break;
    }

    if (group_of[bu] == kNone && group_of[bv] == kNone) {
      std::size_t row = kNone;
      double score = -std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows; ++r) {
        if (owner[r] != kNone) continue;
        const double s = column_value(sol, n_g, r, bu) + column_value(sol, n_g, r, bv);
        if (s > score) {
          score = s;
          row = r;
        }
      }
      owner[row] = groups.size();
      groups.push_back({row});
      pin(bu, groups.size() - 1);
      pin(bv, groups.size() - 1);
    } else if (group_of[bu] == kNone) {
      pin(bu, group_of[bv]);
    } else {
      pin(bv, group_of[bu]);
    }
  }

  Matching& m = result.matching;
  for (const Group& grp : groups) {
    (void)grp;
    m.clusters.emplace_back();
  }
  for (std::size_t u = 0; u < total; ++u) {
    Cluster& c = m.clusters[group_of[u]];
    if (is_g(u)) c.g.push_back(u);
    else c.h.push_back(u - n_g);
  }
  m.objective = evaluate(m, g, h, cfg);
  return result;
}

namespace {

// Exhaustive search over set partitions of G (restricted growth strings, so
// cluster relabelings are visited once) and assignments of H to those
// clusters or to fresh ones. Scores by direct summation over vertex pairs.
class BruteForce {
 public:
  BruteForce(const Graph& g, const Graph& h, const SolverConfig& cfg)
      : g_(g), h_(h), cfg_(cfg), rows_(cluster_rows(g, h)), row_g_(g.size()), row_h_(h.size()) {
    if (cfg.similarity) {
      c_ = *cfg.similarity;
      if (cfg.negate_similarity) c_ = -c_;
    }
  }

  Matching run() {
    assign_g(0, 0);
    Matching m;
    m.clusters.resize(rows_);
    for (std::size_t v = 0; v < g_.size(); ++v) m.clusters[best_g_[v]].g.push_back(v);
    for (std::size_t v = 0; v < h_.size(); ++v) m.clusters[best_h_[v]].h.push_back(v);
    std::erase_if(m.clusters, [](const Cluster& c) { return c.g.empty() && c.h.empty(); });
    m.objective = best_;
    return m;
  }

 private:
  void assign_g(std::size_t v, std::size_t used) {
    if (v == g_.size()) {
      assign_h(0, used);
      return;
    }
    for (std::size_t r = 0; r <= used && r < rows_; ++r) {
      if (count_g(r, v) >= cfg_.k_max) continue;
      row_g_[v] = r;
      assign_g(v + 1, std::max(used, r + 1));
    }
  }

  void assign_h(std::size_t v, std::size_t used) {
    if (v == h_.size()) {
      score();
      return;
    }
    for (std::size_t r = 0; r <= used && r < rows_; ++r) {
      if (count_h(r, v) >= cfg_.k_max) continue;
      row_h_[v] = r;
      assign_h(v + 1, std::max(used, r + 1));
    }
  }

  std::size_t count_g(std::size_t r, std::size_t upto) const {
    return static_cast<std::size_t>(std::count(row_g_.begin(), row_g_.begin() + static_cast<std::ptrdiff_t>(upto), r));
  }
  std::size_t count_h(std::size_t r, std::size_t upto) const {
    return static_cast<std::size_t>(std::count(row_h_.begin(), row_h_.begin() + static_cast<std::ptrdiff_t>(upto), r));
  }

  void score() {
    std::vector<double> diff(rows_ * rows_, 0.0);
    double merged = 0.0;
    for (std::size_t i = 0; i < g_.size(); ++i)
      for (std::size_t j = 0; j < g_.size(); ++j) {
        const double w = g_.weight(i, j);
        if (w == 0.0) continue;
        diff[row_g_[i] * rows_ + row_g_[j]] += w;
        if (row_g_[i] == row_g_[j]) merged += w;
      }
    for (std::size_t i = 0; i < h_.size(); ++i)
      for (std::size_t j = 0; j < h_.size(); ++j) {
        const double w = h_.weight(i, j);
        if (w == 0.0) continue;
        diff[row_h_[i] * rows_ + row_h_[j]] -= w;
        if (row_h_[i] == row_h_[j]) merged += w;
      }
    double structural = 0.0;
    for (double d : diff) structural += d * d;
    double value = (1.0 - cfg_.lambda) * structural - cfg_.mu * merged;
    if (cfg_.lambda > 0.0) {
      double local = 0.0;
      for (std::size_t i = 0; i < g_.size(); ++i)
        for (std::size_t j = 0; j < h_.size(); ++j)
          if (row_g_[i] == row_h_[j]) local += c_(idx(i), idx(j));
      value += cfg_.lambda * local;
    }
    if (value < best_) {
      best_ = value;
      best_g_ = row_g_;
      best_h_ = row_h_;
    }
  }

  const Graph& g_;
  const Graph& h_;
  const SolverConfig& cfg_;
  std::size_t rows_;
  Matrix c_;
  std::vector<std::size_t> row_g_, row_h_, best_g_, best_h_;
  double best_ = std::numeric_limits<double>::infinity();
};

}  // namespace

Matching brute_force_optimum(const Graph& g, const Graph& h, const SolverConfig& cfg) {
  if (g.size() > 6 || h.size() > 6 || cfg.k_max > 3)
    throw Error(Error::Code::kInvalidArgument, "brute force is limited to 6 vertices per graph and k_max <= 3");
  validate_problem(g, h, cfg);
  if (cfg.lambda > 0.0 && (!cfg.similarity || cfg.similarity->rows() != idx(g.size()) || cfg.similarity->cols() != idx(h.size())))
    throw Error(Error::Code::kInvalidArgument, "lambda > 0 requires an N_G x N_H similarity matrix");
  return BruteForce(g, h, cfg).run();
}

}  // namespace mtm
