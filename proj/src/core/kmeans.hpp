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
#include <cstdint>
#include <vector>

#include "graph.hpp"

namespace mtm {

struct KMeansOptions {
  std::size_t restarts = 20;
  std::size_t max_iters = 300;
  double tolerance = 1e-8;  // stop when no centre moves farther than this
  std::uint64_t seed = 0;
};

struct KMeansResult {
  std::vector<std::size_t> labels;  // compacted: 0..centers.cols()-1, no empty clusters
  Matrix centers;                   // one centre per column
  double inertia = 0.0;
};

/// Lloyd's algorithm with k-means++ seeding on the columns of `points`; keeps
/// the restart with the lowest inertia. Fewer than k clusters come back when
/// the points have fewer than k distinct positions.
KMeansResult kmeans(const Matrix& points, std::size_t k, const KMeansOptions& opts);

}  // namespace mtm
