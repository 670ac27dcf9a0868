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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace mtm {

using Matrix = Eigen::MatrixXd;

/// Error raised by the library for invalid inputs. The code is mirrored by the
/// C API status values.
class Error : public std::runtime_error {
 public:
  enum class Code {
    kInvalidArgument = 1,
    kParse = 2,
    kIo = 3,
    kInfeasible = 4,
    kDimension = 5,
  };

  Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Weighted adjacency matrix with optional per-vertex labels and coordinates.
/// Immutable after construction.
class Graph {
 public:
  Graph() = default;

  /// Throws if adj is not square, has non-finite entries, is asymmetric while
  /// directed == false, or if labels/coords have the wrong length.
  explicit Graph(Matrix adj, bool directed = false,
                 std::optional<std::vector<std::string>> labels = std::nullopt,
                 std::optional<std::vector<Point2>> coords = std::nullopt);

  /// Empty undirected graph on n vertices.
  static Graph empty(std::size_t n);

  std::size_t size() const noexcept { return static_cast<std::size_t>(adj_.rows()); }
  const Matrix& adjacency() const noexcept { return adj_; }
  double weight(std::size_t i, std::size_t j) const { return adj_(i, j); }
  bool directed() const noexcept { return directed_; }

  bool has_labels() const noexcept { return labels_.has_value(); }
  const std::vector<std::string>& labels() const;
  bool has_coords() const noexcept { return coords_.has_value(); }
  const std::vector<Point2>& coords() const;

  /// Number of (unordered for undirected, ordered for directed) non-zero
  /// off-diagonal entries plus non-zero diagonal entries.
  std::size_t edge_count() const;
  std::vector<double> degrees() const;

  Graph with_labels(std::vector<std::string> labels) const;
  Graph with_coords(std::vector<Point2> coords) const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  Matrix adj_;
  bool directed_ = false;
  std::optional<std::vector<std::string>> labels_;
  std::optional<std::vector<Point2>> coords_;
};

/// Relabels vertices: vertex i of the input becomes vertex perm[i] of the
/// output, so out(perm[i], perm[j]) == in(i, j).
Graph permute(const Graph& graph, std::span<const std::size_t> perm);

/// Inverse of a permutation given as an image array. Throws if perm is not a
/// bijection on {0..n-1}.
std::vector<std::size_t> invert_permutation(std::span<const std::size_t> perm);

/// Parses the text graph format. Errors carry the offending line number.
Graph parse_graph(const std::string& text, const std::string& source = "<string>");
Graph read_graph(const std::string& path);

std::string format_graph(const Graph& graph);
void write_graph(const Graph& graph, const std::string& path);

}  // namespace mtm
