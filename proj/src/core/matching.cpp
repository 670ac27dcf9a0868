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

#include "matching.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace mtm {

namespace {

using Index = Eigen::Index;

void append_list(std::ostringstream& out, const std::vector<std::size_t>& v) {
  for (std::size_t k = 0; k < v.size(); ++k) out << (k ? "," : "") << v[k];
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

AssignmentPair to_assignment(const Matching& m, std::size_t n_g, std::size_t n_h, std::size_t min_rows) {
  const auto rows = static_cast<Index>(std::max(min_rows, m.clusters.size()));
  AssignmentPair p{Matrix::Zero(rows, static_cast<Index>(n_g)), Matrix::Zero(rows, static_cast<Index>(n_h))};
  for (std::size_t c = 0; c < m.clusters.size(); ++c) {
    for (std::size_t v : m.clusters[c].g) {
      if (v >= n_g) throw Error(Error::Code::kDimension, "matching references a G vertex out of range");
      p.p1(static_cast<Index>(c), static_cast<Index>(v)) = 1.0;
    }
    for (std::size_t v : m.clusters[c].h) {
      if (v >= n_h) throw Error(Error::Code::kDimension, "matching references an H vertex out of range");
      p.p2(static_cast<Index>(c), static_cast<Index>(v)) = 1.0;
    }
  }
  return p;
}

Matching from_assignment(const AssignmentPair& p) {
  std::vector<Cluster> rows(static_cast<std::size_t>(p.p1.rows()));
  for (Index j = 0; j < p.p1.cols(); ++j) {
    Index r = 0;
    p.p1.col(j).maxCoeff(&r);
    rows[static_cast<std::size_t>(r)].g.push_back(static_cast<std::size_t>(j));
  }
  for (Index j = 0; j < p.p2.cols(); ++j) {
    Index r = 0;
    p.p2.col(j).maxCoeff(&r);
    rows[static_cast<std::size_t>(r)].h.push_back(static_cast<std::size_t>(j));
  }
  Matching m;
  for (auto& c : rows)
    if (!c.g.empty() || !c.h.empty()) m.clusters.push_back(std::move(c));
  return m;
}

double evaluate(const Matching& m, const Graph& g, const Graph& h, const SolverConfig& cfg) {
  const AssignmentPair p = to_assignment(m, g.size(), h.size());
  return objective(g, h, p.p1, p.p2, cfg);
}

void validate_matching(const Matching& m, std::size_t n_g, std::size_t n_h, std::size_t k_max) {
  std::vector<int> seen_g(n_g, 0), seen_h(n_h, 0);
  for (const Cluster& c : m.clusters) {
    if (c.g.empty() && c.h.empty()) throw Error(Error::Code::kInvalidArgument, "matching has an empty cluster");
    if (c.g.size() > k_max || c.h.size() > k_max)
      throw Error(Error::Code::kInvalidArgument, "cluster exceeds k_max on one side");
    for (std::size_t v : c.g) {
      if (v >= n_g) throw Error(Error::Code::kDimension, "G vertex out of range in matching");
      ++seen_g[v];
    }
    for (std::size_t v : c.h) {
      if (v >= n_h) throw Error(Error::Code::kDimension, "H vertex out of range in matching");
      ++seen_h[v];
    }
  }
  auto once = [](const std::vector<int>& s) { return std::all_of(s.begin(), s.end(), [](int x) { return x == 1; }); };
  if (!once(seen_g) || !once(seen_h))
    throw Error(Error::Code::kInvalidArgument, "every vertex must appear in exactly one cluster");
}

Matching canonical(Matching m) {
  constexpr auto kNone = std::numeric_limits<std::size_t>::max();
  for (Cluster& c : m.clusters) {
    std::sort(c.g.begin(), c.g.end());
    std::sort(c.h.begin(), c.h.end());
  }
  std::sort(m.clusters.begin(), m.clusters.end(), [](const Cluster& a, const Cluster& b) {
    const auto ka = std::pair(a.g.empty() ? kNone : a.g.front(), a.h.empty() ? kNone : a.h.front());
    const auto kb = std::pair(b.g.empty() ? kNone : b.g.front(), b.h.empty() ? kNone : b.h.front());
    return ka < kb;
  });
  return m;
}

std::string format_matching(const Matching& m) {
  std::ostringstream out;
  for (std::size_t c = 0; c < m.clusters.size(); ++c) {
    out << "cluster " << c << " | G: ";
    append_list(out, m.clusters[c].g);
    out << " | H: ";
    append_list(out, m.clusters[c].h);
    out << '\n';
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), m.objective);
  out << "objective " << std::string(buf, res.ptr) << '\n';
  return out.str();
}

Matching parse_matching(const std::string& text, const std::string& source) {
  Matching m;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_objective = false;
  auto fail = [&](const std::string& msg) {
    throw Error(Error::Code::kParse, source + ":" + std::to_string(lineno) + ": " + msg);
  };
  auto parse_list = [&](const std::string& field, const char* tag) {
    const std::string body = trim(field);
    const std::string prefix = std::string(tag) + ":";
    if (body.rfind(prefix, 0) != 0) fail(std::string("expected '") + tag + ":' field");
    std::vector<std::size_t> out;
    std::istringstream items(body.substr(prefix.size()));
    std::string item;
    while (std::getline(items, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      std::size_t v = 0;
      auto res = std::from_chars(item.data(), item.data() + item.size(), v);
      if (res.ec != std::errc() || res.ptr != item.data() + item.size()) fail("invalid vertex index '" + item + "'");
      out.push_back(v);
    }
    return out;
  };

  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("cluster", 0) == 0) {
      std::vector<std::string> fields;
      std::istringstream parts(line);
      std::string f;
      while (std::getline(parts, f, '|')) fields.push_back(f);
      if (fields.size() != 3) fail("expected 'cluster <id> | G: ... | H: ...'");
      Cluster c;
      c.g = parse_list(fields[1], "G");
      c.h = parse_list(fields[2], "H");
      m.clusters.push_back(std::move(c));
    } else if (line.rfind("objective", 0) == 0) {
      const std::string value = trim(line.substr(9));
      const char* first = value.data();
      if (!value.empty() && *first == '+') ++first;
      auto res = std::from_chars(first, value.data() + value.size(), m.objective);
      if (value.empty() || res.ec != std::errc() || res.ptr != value.data() + value.size()) fail("invalid objective value");
      have_objective = true;
    } else {
      fail("unknown record");
    }
  }
  if (!have_objective) throw Error(Error::Code::kParse, source + ": missing 'objective' line");
  return m;
}

}  // namespace mtm
