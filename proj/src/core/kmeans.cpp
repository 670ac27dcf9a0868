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

#include "kmeans.hpp"

#include <limits>

#include "random.hpp"

namespace mtm {

namespace {

using Index = Eigen::Index;

KMeansResult run_once(const Matrix& points, std::size_t k, const KMeansOptions& opts, Rng& rng) {
  const Index n = points.cols();
  std::vector<Index> chosen;
  chosen.push_back(static_cast<Index>(uniform_index(rng, static_cast<std::size_t>(n))));
  Eigen::VectorXd d2(n);
  for (Index i = 0; i < n; ++i) d2(i) = (points.col(i) - points.col(chosen[0])).squaredNorm();
  while (chosen.size() < k) {
    const double total = d2.sum();
    if (total <= 0.0) break;
    const double target = uniform01(rng) * total;
    double acc = 0.0;
    Index pick = -1;
    for (Index i = 0; i < n; ++i) {
      if (d2(i) <= 0.0) continue;
      acc += d2(i);
      pick = i;
      if (acc > target) break;
    }
    chosen.push_back(pick);
    for (Index i = 0; i < n; ++i) d2(i) = std::min(d2(i), (points.col(i) - points.col(pick)).squaredNorm());
  }

  Matrix centers(points.rows(), static_cast<Index>(chosen.size()));
  for (std::size_t c = 0; c < chosen.size(); ++c) centers.col(static_cast<Index>(c)) = points.col(chosen[c]);

  std::vector<std::size_t> labels(static_cast<std::size_t>(n), 0);
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    for (Index i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (Index c = 0; c < centers.cols(); ++c) {
        const double d = (points.col(i) - centers.col(c)).squaredNorm();
        if (d < best) {
          best = d;
          labels[static_cast<std::size_t>(i)] = static_cast<std::size_t>(c);
        }
      }
    }
    Matrix next = Matrix::Zero(centers.rows(), centers.cols());
    std::vector<std::size_t> count(static_cast<std::size_t>(centers.cols()), 0);
    for (Index i = 0; i < n; ++i) {
      next.col(static_cast<Index>(labels[static_cast<std::size_t>(i)])) += points.col(i);
      ++count[labels[static_cast<std::size_t>(i)]];
    }
    double moved = 0.0;
    for (Index c = 0; c < centers.cols(); ++c) {
      if (count[static_cast<std::size_t>(c)] == 0) {
        next.col(c) = centers.col(c);  // empty; dropped after convergence
        continue;
      }
      next.col(c) /= static_cast<double>(count[static_cast<std::size_t>(c)]);
      moved = std::max(moved, (next.col(c) - centers.col(c)).norm());
    }
    centers = std::move(next);
    if (moved <= opts.tolerance) break;
  }

  // Compact away empty clusters.
  std::vector<Index> remap(static_cast<std::size_t>(centers.cols()), -1);
  KMeansResult res;
  std::vector<Index> kept;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& r = remap[labels[i]];
    if (r < 0) {
      r = static_cast<Index>(kept.size());
      kept.push_back(static_cast<Index>(labels[i]));
    }
    labels[i] = static_cast<std::size_t>(r);
  }
  res.centers.resize(centers.rows(), static_cast<Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) res.centers.col(static_cast<Index>(c)) = centers.col(kept[c]);
  for (Index i = 0; i < n; ++i)
    res.inertia += (points.col(i) - res.centers.col(static_cast<Index>(labels[static_cast<std::size_t>(i)]))).squaredNorm();
  res.labels = std::move(labels);
  return res;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, std::size_t k, const KMeansOptions& opts) {
  if (k == 0) throw Error(Error::Code::kInvalidArgument, "k-means needs k >= 1");
  if (points.cols() == 0) return {};
  Rng rng(opts.seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(1, opts.restarts); ++r) {
    KMeansResult res = run_once(points, k, opts, rng);
    if (res.inertia < best.inertia) best = std::move(res);
  }
  return best;
}

}  // namespace mtm
