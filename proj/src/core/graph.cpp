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

#include "graph.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

namespace mtm {

namespace {

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

[[noreturn]] void parse_fail(const std::string& source, std::size_t line, const std::string& msg) {
  throw Error(Error::Code::kParse, source + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool parse_double(const std::string& tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

bool parse_index(const std::string& tok, std::size_t& out) {
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc() && res.ptr == tok.data() + tok.size();
}

}  // namespace

Graph::Graph(Matrix adj, bool directed, std::optional<std::vector<std::string>> labels,
             std::optional<std::vector<Point2>> coords)
    : adj_(std::move(adj)), directed_(directed), labels_(std::move(labels)), coords_(std::move(coords)) {
  if (adj_.rows() != adj_.cols()) throw Error(Error::Code::kDimension, "adjacency matrix must be square");
  if (!adj_.allFinite()) throw Error(Error::Code::kInvalidArgument, "adjacency matrix has non-finite entries");
  if (!directed_ && adj_ != adj_.transpose())
    throw Error(Error::Code::kInvalidArgument, "undirected graph requires a symmetric adjacency matrix");
  if (labels_ && labels_->size() != size())
    throw Error(Error::Code::kDimension, "label count does not match vertex count");
  if (coords_ && coords_->size() != size())
    throw Error(Error::Code::kDimension, "coordinate count does not match vertex count");
}

Graph Graph::empty(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  return Graph(Matrix::Zero(m, m));
}

const std::vector<std::string>& Graph::labels() const {
  if (!labels_) throw Error(Error::Code::kInvalidArgument, "graph has no labels");
  return *labels_;
}

const std::vector<Point2>& Graph::coords() const {
  if (!coords_) throw Error(Error::Code::kInvalidArgument, "graph has no coordinates");
  return *coords_;
}

std::size_t Graph::edge_count() const {
  std::size_t count = 0;
  const auto n = adj_.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = directed_ ? 0 : i; j < n; ++j)
      if (adj_(i, j) != 0.0) ++count;
  return count;
}

std::vector<double> Graph::degrees() const {
  std::vector<double> deg(size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (adj_(i, j) != 0.0 || adj_(j, i) != 0.0) deg[i] += 1.0;
  return deg;
}

Graph Graph::with_labels(std::vector<std::string> labels) const {
  return Graph(adj_, directed_, std::move(labels), coords_);
}

Graph Graph::with_coords(std::vector<Point2> coords) const {
  return Graph(adj_, directed_, labels_, std::move(coords));
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.size() != b.size() || a.directed_ != b.directed_) return false;
  // Bitwise comparison; -0.0 and 0.0 are treated as distinct.
  for (Eigen::Index i = 0; i < a.adj_.size(); ++i) {
    const double x = a.adj_.data()[i];
    const double y = b.adj_.data()[i];
    if (std::memcmp(&x, &y, sizeof(double)) != 0) return false;
  }
  return a.labels_ == b.labels_ && a.coords_ == b.coords_;
}

std::vector<std::size_t> invert_permutation(std::span<const std::size_t> perm) {
  std::vector<std::size_t> inv(perm.size(), perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (perm[i] >= perm.size() || inv[perm[i]] != perm.size())
      throw Error(Error::Code::kInvalidArgument, "permutation is not a bijection");
    inv[perm[i]] = i;
  }
  return inv;
}

Graph permute(const Graph& graph, std::span<const std::size_t> perm) {
  if (perm.size() != graph.size()) throw Error(Error::Code::kDimension, "permutation length does not match graph size");
  invert_permutation(perm);  // validates
  const auto n = static_cast<Eigen::Index>(graph.size());
  Matrix adj(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      adj(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(perm[j])) = graph.adjacency()(i, j);

  std::optional<std::vector<std::string>> labels;
  if (graph.has_labels()) {
    labels.emplace(graph.size());
    for (std::size_t i = 0; i < graph.size(); ++i) (*labels)[perm[i]] = graph.labels()[i];
  }
  std::optional<std::vector<Point2>> coords;
  if (graph.has_coords()) {
    coords.emplace(graph.size());
    for (std::size_t i = 0; i < graph.size(); ++i) (*coords)[perm[i]] = graph.coords()[i];
  }
  return Graph(std::move(adj), graph.directed(), std::move(labels), std::move(coords));
}

Graph parse_graph(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  bool directed = false;
  std::size_t n = 0;
  Matrix adj;
  Matrix seen;  // 1 where an edge line has set the entry
  std::vector<std::string> labels;
  std::vector<Point2> coords;
  std::vector<char> has_label, has_coord;

  auto index_arg = [&](const std::string& tok) {
    std::size_t idx = 0;
    if (!parse_index(tok, idx)) parse_fail(source, lineno, "invalid vertex index '" + tok + "'");
    if (idx >= n) parse_fail(source, lineno, "vertex index " + tok + " out of range");
    return static_cast<Eigen::Index>(idx);
  };
  auto number_arg = [&](const std::string& tok) {
    double v = 0.0;
    if (!parse_double(tok, v)) parse_fail(source, lineno, "invalid number '" + tok + "'");
    return v;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto toks = split_ws(line);
    const std::string& kind = toks[0];

    if (!have_header) {
      if (kind != "graph" || toks.size() != 3) parse_fail(source, lineno, "expected header 'graph <n> <directed|undirected>'");
      if (!parse_index(toks[1], n)) parse_fail(source, lineno, "invalid vertex count '" + toks[1] + "'");
      if (toks[2] == "directed") directed = true;
      else if (toks[2] == "undirected") directed = false;
      else parse_fail(source, lineno, "expected 'directed' or 'undirected', got '" + toks[2] + "'");
      const auto m = static_cast<Eigen::Index>(n);
      adj = Matrix::Zero(m, m);
      seen = Matrix::Zero(m, m);
      labels.assign(n, {});
      coords.assign(n, {});
      has_label.assign(n, 0);
      has_coord.assign(n, 0);
      have_header = true;
      continue;
    }

    if (kind == "edge") {
      if (toks.size() != 4) parse_fail(source, lineno, "expected 'edge <i> <j> <weight>'");
      const auto i = index_arg(toks[1]);
      const auto j = index_arg(toks[2]);
      const double w = number_arg(toks[3]);
      auto set = [&](Eigen::Index a, Eigen::Index b) {
        if (seen(a, b) != 0.0 && adj(a, b) != w) {
          if (!directed) parse_fail(source, lineno, "asymmetric weights for undirected edge");
          parse_fail(source, lineno, "conflicting duplicate edge");
        }
        adj(a, b) = w;
        seen(a, b) = 1.0;
      };
      set(i, j);
      if (!directed) set(j, i);
    } else if (kind == "label") {
      std::istringstream ls(line);
      std::string kw, idx, value;
      ls >> kw >> idx;
      std::getline(ls, value);
      const auto b = value.find_first_not_of(" \t");
      const auto e = value.find_last_not_of(" \t");
      if (toks.size() < 3 || b == std::string::npos) parse_fail(source, lineno, "expected 'label <i> <string>'");
      const auto i = static_cast<std::size_t>(index_arg(idx));
      labels[i] = value.substr(b, e - b + 1);
      has_label[i] = 1;
    } else if (kind == "coord") {
      if (toks.size() != 4) parse_fail(source, lineno, "expected 'coord <i> <x> <y>'");
      const auto i = static_cast<std::size_t>(index_arg(toks[1]));
      coords[i] = {number_arg(toks[2]), number_arg(toks[3])};
      has_coord[i] = 1;
    } else {
      parse_fail(source, lineno, "unknown record '" + kind + "'");
    }
  }
  if (!have_header) parse_fail(source, lineno, "missing 'graph' header");

  auto count = [](const std::vector<char>& v) { return std::accumulate(v.begin(), v.end(), std::size_t{0}); };
  std::optional<std::vector<std::string>> opt_labels;
  std::optional<std::vector<Point2>> opt_coords;
  if (count(has_label) > 0) {
    if (count(has_label) != n) parse_fail(source, lineno, "labels given for some but not all vertices");
    opt_labels = std::move(labels);
  }
  if (count(has_coord) > 0) {
    if (count(has_coord) != n) parse_fail(source, lineno, "coordinates given for some but not all vertices");
    opt_coords = std::move(coords);
  }
  return Graph(std::move(adj), directed, std::move(opt_labels), std::move(opt_coords));
}

Graph read_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Error::Code::kIo, "cannot open graph file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str(), path);
}

std::string format_graph(const Graph& graph) {
  std::ostringstream out;
  const std::size_t n = graph.size();
  out << "graph " << n << (graph.directed() ? " directed" : " undirected") << '\n';
  if (graph.has_labels())
    for (std::size_t i = 0; i < n; ++i) out << "label " << i << ' ' << graph.labels()[i] << '\n';
  if (graph.has_coords())
    for (std::size_t i = 0; i < n; ++i)
      out << "coord " << i << ' ' << shortest(graph.coords()[i].x) << ' ' << shortest(graph.coords()[i].y) << '\n';
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = graph.directed() ? 0 : i; j < n; ++j) {
      const double w = graph.weight(i, j);
      if (w != 0.0 || std::signbit(w)) out << "edge " << i << ' ' << j << ' ' << shortest(w) << '\n';
    }
  return out.str();
}

void write_graph(const Graph& graph, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Error::Code::kIo, "cannot write graph file '" + path + "'");
  out << format_graph(graph);
  if (!out) throw Error(Error::Code::kIo, "failed writing graph file '" + path + "'");
}

}  // namespace mtm
