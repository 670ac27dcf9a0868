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

#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include <Eigen/Sparse>

#include "assignment.hpp"

namespace mtm {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

const Matrix* effective_similarity(const SolverConfig& cfg, Matrix& scratch) {
  if (!cfg.similarity) return nullptr;
  if (!cfg.negate_similarity) return &*cfg.similarity;
  scratch = -*cfg.similarity;
  return &scratch;
}

void check_dims(const Graph& g, const Graph& h, const Matrix& p1, const Matrix& p2, const SolverConfig& cfg) {
  if (p1.cols() != idx(g.size()) || p2.cols() != idx(h.size()) || p1.rows() != p2.rows())
    throw Error(Error::Code::kDimension, "assignment matrices do not match graph sizes");
  if (!(cfg.lambda >= 0.0 && cfg.lambda <= 1.0)) throw Error(Error::Code::kInvalidArgument, "lambda must lie in [0, 1]");
  if (cfg.lambda > 0.0) {
    if (!cfg.similarity) throw Error(Error::Code::kInvalidArgument, "lambda > 0 requires a similarity matrix");
    if (cfg.similarity->rows() != idx(g.size()) || cfg.similarity->cols() != idx(h.size()))
      throw Error(Error::Code::kDimension, "similarity matrix must be N_G x N_H");
  }
}

// Real roots of a x^3 + b x^2 + c x + d inside [0, 1].
std::vector<double> cubic_roots_in_unit(double a, double b, double c, double d) {
  std::vector<double> roots;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (scale == 0.0) return roots;
  constexpr double kTiny = 1e-14;
  if (std::abs(a) <= kTiny * scale) {
    if (std::abs(b) <= kTiny * scale) {
      if (std::abs(c) > kTiny * scale) roots.push_back(-d / c);
    } else {
      const double disc = c * c - 4.0 * b * d;
      if (disc >= 0.0) {
        // Numerically stable quadratic formula.
        const double q = -0.5 * (c + std::copysign(std::sqrt(disc), c));
        if (q != 0.0) roots.push_back(d / q);
        roots.push_back(q / b);
      }
    }
  } else {
    const double bn = b / a, cn = c / a, dn = d / a;
    const double shift = bn / 3.0;
    const double p = cn - bn * bn / 3.0;
    const double q = 2.0 * bn * bn * bn / 27.0 - bn * cn / 3.0 + dn;
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    if (disc > 0.0) {
      const double s = std::sqrt(disc);
      roots.push_back(std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s) - shift);
    } else if (p == 0.0) {
      roots.push_back(-shift);
    } else {
      const double r = 2.0 * std::sqrt(-p / 3.0);
      const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
      const double theta = std::acos(arg) / 3.0;
      for (int k = 0; k < 3; ++k) roots.push_back(r * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - shift);
    }
  }
  // Newton polish against the original cubic.
  for (double& x : roots) {
    for (int it = 0; it < 3; ++it) {
      const double f = ((a * x + b) * x + c) * x + d;
      const double df = (3.0 * a * x + 2.0 * b) * x + c;
      if (df == 0.0) break;
      const double nx = x - f / df;
      if (!std::isfinite(nx)) break;
      x = nx;
    }
  }
  std::erase_if(roots, [](double x) { return !(x > 0.0 && x < 1.0); });
  return roots;
}

double eval_poly(const std::array<double, 5>& c, double x) {
  return (((c[4] * x + c[3]) * x + c[2]) * x + c[1]) * x + c[0];
}

// Pinned-column counts per row for one side.
std::vector<std::size_t> pinned_counts(const SolverConfig& cfg, Side side, std::size_t rows) {
  std::vector<std::size_t> count(rows, 0);
  for (const Pin& pin : cfg.pinned) {
    if (pin.side != side) continue;
    if (pin.row >= rows) throw Error(Error::Code::kDimension, "pinned row out of range");
    ++count[pin.row];
  }
  return count;
}

Matrix side_direction(const Matrix& grad, const SolverConfig& cfg, Side side) {
  const auto rows = static_cast<std::size_t>(grad.rows());
  const auto cols = static_cast<std::size_t>(grad.cols());
  std::vector<char> fixed(cols, 0);
  Matrix q = Matrix::Zero(grad.rows(), grad.cols());
  for (const Pin& pin : cfg.pinned) {
    if (pin.side != side) continue;
    if (pin.vertex >= cols) throw Error(Error::Code::kDimension, "pinned vertex out of range");
    fixed[pin.vertex] = 1;
    q(idx(pin.row), idx(pin.vertex)) = 1.0;
  }
  const auto used = pinned_counts(cfg, side, rows);
  std::vector<std::size_t> capacity(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    if (used[r] > cfg.k_max) throw Error(Error::Code::kInfeasible, "pinned columns exceed k_max on a row");
    capacity[r] = cfg.k_max - used[r];
  }
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < cols; ++j)
    if (!fixed[j]) free_cols.push_back(j);
  if (free_cols.empty()) return q;

  Matrix sub(grad.rows(), idx(free_cols.size()));
  for (std::size_t k = 0; k < free_cols.size(); ++k) sub.col(idx(k)) = grad.col(idx(free_cols[k]));
  const SemiAssignment sa = solve_semi_assignment(sub, capacity);
  for (std::size_t k = 0; k < free_cols.size(); ++k) q(idx(sa.row_of_col[k]), idx(free_cols[k])) = 1.0;
  return q;
}

// Moves the excess mass of over-full rows of one side to rows with slack,
// taking it proportionally from the unpinned columns.
void restore_caps(Matrix& m, const std::vector<char>& fixed, double cap) {
  const Index rows = m.rows();
  Eigen::VectorXd sums = m.rowwise().sum();
  std::vector<char> full(static_cast<std::size_t>(rows), 0);
  for (Index r = 0; r < rows; ++r) full[static_cast<std::size_t>(r)] = sums(r) > cap;
  for (Index r = 0; r < rows; ++r) {
    const double excess = sums(r) - cap;
    if (excess <= 0.0) continue;
    double movable = 0.0;
    for (Index j = 0; j < m.cols(); ++j)
      if (!fixed[static_cast<std::size_t>(j)]) movable += m(r, j);
    if (movable <= 0.0) throw Error(Error::Code::kInfeasible, "pinned columns exceed k_max on a row");
    const double share = std::min(1.0, excess / movable);
    for (Index j = 0; j < m.cols(); ++j) {
      if (fixed[static_cast<std::size_t>(j)] || m(r, j) <= 0.0) continue;
      double slack = 0.0;
      for (Index t = 0; t < rows; ++t)
        if (!full[static_cast<std::size_t>(t)]) slack += std::max(0.0, cap - sums(t));
      if (slack <= 0.0) break;
      const double amount = std::min(share * m(r, j), slack);
      m(r, j) -= amount;
      sums(r) -= amount;
      const double scale = std::min(1.0, amount / slack);
      for (Index t = 0; t < rows; ++t) {
        if (full[static_cast<std::size_t>(t)]) continue;
        const double add = scale * std::max(0.0, cap - sums(t));
        m(t, j) += add;
        sums(t) += add;
      }
    }
  }
}

// Moves a relaxed pair onto the face defined by the pinned columns: pinned
// columns become one-hot and over-full rows shed their excess.
AssignmentPair enter_face(AssignmentPair p, const SolverConfig& cfg) {
  std::vector<char> fixed1(static_cast<std::size_t>(p.p1.cols()), 0), fixed2(static_cast<std::size_t>(p.p2.cols()), 0);
  for (const Pin& pin : cfg.pinned) {
    Matrix& m = pin.side == Side::kG ? p.p1 : p.p2;
    m.col(idx(pin.vertex)).setZero();
    m(idx(pin.row), idx(pin.vertex)) = 1.0;
    (pin.side == Side::kG ? fixed1 : fixed2)[pin.vertex] = 1;
  }
  if (is_feasible(p, cfg, 1e-12)) return p;
  const double cap = static_cast<double>(cfg.k_max);
  restore_caps(p.p1, fixed1, cap);
  restore_caps(p.p2, fixed2, cap);
  return p;
}

}  // namespace

Matrix coordinate_similarity(const Graph& g, const Graph& h) {
  if (!g.has_coords() || !h.has_coords())
    throw Error(Error::Code::kInvalidArgument, "coordinate similarity needs coordinates on both graphs");
  Matrix c(idx(g.size()), idx(h.size()));
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j) {
      const double dx = g.coords()[i].x - h.coords()[j].x;
      const double dy = g.coords()[i].y - h.coords()[j].y;
      c(idx(i), idx(j)) = std::exp(-dx * dx - dy * dy);
    }
  return c;
}

std::size_t cluster_rows(const Graph& g, const Graph& h) { return std::min(g.size(), h.size()); }

void validate_problem(const Graph& g, const Graph& h, const SolverConfig& cfg) {
  if (g.size() == 0 || h.size() == 0) throw Error(Error::Code::kInvalidArgument, "graphs must be non-empty");
  if (cfg.k_max == 0) throw Error(Error::Code::kInvalidArgument, "k_max must be positive");
  if (!(cfg.epsilon > 0.0)) throw Error(Error::Code::kInvalidArgument, "epsilon must be positive");
  if (!(cfg.lambda >= 0.0 && cfg.lambda <= 1.0)) throw Error(Error::Code::kInvalidArgument, "lambda must lie in [0, 1]");
  if (cfg.max_iters == 0) throw Error(Error::Code::kInvalidArgument, "max_iters must be positive");
  const std::size_t nk = cluster_rows(g, h);
  if (cfg.k_max * nk < std::max(g.size(), h.size()))
    throw Error(Error::Code::kInfeasible, "k_max * N_K is smaller than the larger graph");
}

namespace {

using Sparse = Eigen::SparseMatrix<double>;

// Data shared by every evaluation within one solve.
struct Problem {
  Problem(const Graph& g, const Graph& h, const SolverConfig& config) : cfg(config) {
    const Matrix& ga = g.adjacency();
    const Matrix& ha = h.adjacency();
    sym_g = ga == ga.transpose();
    sym_h = ha == ha.transpose();
    this->ga = ga;
    this->ha = ha;
    gs = ga.sparseView();
    hs = ha.sparseView();
    if (!sym_g) gts = Matrix(ga.transpose()).sparseView();
    if (!sym_h) hts = Matrix(ha.transpose()).sparseView();
    if (cfg.lambda > 0.0) {
      Matrix scratch;
      c = *effective_similarity(cfg, scratch);
    }
  }

  const SolverConfig& cfg;
  Matrix ga, ha;
  Sparse gs, gts, hs, hts;
  bool sym_g = true;
  bool sym_h = true;
  Matrix c;
};

// Products of one iterate reused by the objective, the gradient and the line
// search.
struct State {
  Matrix p1g, p1gt, p2h, p2ht;  // P1 G, P1 G^T, P2 H, P2 H^T
  Matrix d;                     // P1 G P1^T - P2 H P2^T
  Matrix p1c, p2ct;             // P1 C, P2 C^T
  double lin = 0.0;
  double merge = 0.0;
  double f = 0.0;
};

State evaluate_state(const Problem& pr, const AssignmentPair& p) {
  State s;
  s.p1g = p.p1 * pr.gs;
  s.p1gt = pr.sym_g ? s.p1g : Matrix(p.p1 * pr.gts);
  s.p2h = p.p2 * pr.hs;
  s.p2ht = pr.sym_h ? s.p2h : Matrix(p.p2 * pr.hts);
  s.d.noalias() = s.p1g * p.p1.transpose();
  s.d.noalias() -= s.p2h * p.p2.transpose();
  const double lambda = pr.cfg.lambda;
  if (lambda < 1.0) s.f = (1.0 - lambda) * s.d.squaredNorm();
  if (lambda > 0.0) {
    s.p1c = p.p1 * pr.c;
    s.p2ct = p.p2 * pr.c.transpose();
    // tr(C^T P1^T P2) = sum((P1 C) .* P2)
    s.lin = s.p1c.cwiseProduct(p.p2).sum();
    s.f += lambda * s.lin;
  }
  if (pr.cfg.mu != 0.0) {
    // tr(G^T P1^T P1) = sum(P1 .* (P1 G^T))
    s.merge = p.p1.cwiseProduct(s.p1gt).sum() + p.p2.cwiseProduct(s.p2ht).sum();
    s.f -= pr.cfg.mu * s.merge;
  }
  return s;
}

AssignmentPair gradient_from(const Problem& pr, const State& s) {
  const double lambda = pr.cfg.lambda;
  AssignmentPair out;
  if (lambda < 1.0) {
    const double w = 2.0 * (1.0 - lambda);
    if (pr.sym_g && pr.sym_h) {
      out.p1.noalias() = (2.0 * w) * (s.d * s.p1g);
      out.p2.noalias() = (-2.0 * w) * (s.d * s.p2h);
    } else {
      out.p1.noalias() = w * (s.d * s.p1gt);
      out.p1.noalias() += w * (s.d.transpose() * s.p1g);
      out.p2.noalias() = -w * (s.d * s.p2ht);
      out.p2.noalias() -= w * (s.d.transpose() * s.p2h);
    }
  } else {
    out.p1 = Matrix::Zero(s.p1g.rows(), s.p1g.cols());
    out.p2 = Matrix::Zero(s.p2h.rows(), s.p2h.cols());
  }
  if (lambda > 0.0) {
    out.p1 += lambda * s.p2ct;
    out.p2 += lambda * s.p1c;
  }
  if (pr.cfg.mu != 0.0) {
    out.p1 -= pr.cfg.mu * (s.p1g + s.p1gt);
    out.p2 -= pr.cfg.mu * (s.p2h + s.p2ht);
  }
  return out;
}

// A direction matrix, with a fast path when every column holds a single 1.
class Direction {
 public:
  explicit Direction(const Matrix& q) : q_(q) {
    rows_.resize(static_cast<std::size_t>(q.cols()));
    for (Index j = 0; j < q.cols(); ++j) {
      Index hot = -1;
      for (Index r = 0; r < q.rows(); ++r) {
        const double v = q(r, j);
        if (v == 0.0) continue;
        if (v != 1.0 || hot >= 0) {
          rows_.clear();
          one_hot_ = false;
          return;
        }
        hot = r;
      }
      if (hot < 0) {
        rows_.clear();
        one_hot_ = false;
        return;
      }
      rows_[static_cast<std::size_t>(j)] = hot;
    }
  }

  // Q X
  Matrix left(const Matrix& x) const {
    if (!one_hot_) return q_ * x;
    Matrix out = Matrix::Zero(q_.rows(), x.cols());
    for (std::size_t j = 0; j < rows_.size(); ++j) out.row(rows_[j]) += x.row(idx(j));
    return out;
  }
  // X Q^T
  Matrix right_t(const Matrix& x) const {
    if (!one_hot_) return x * q_.transpose();
    Matrix out = Matrix::Zero(x.rows(), q_.rows());
    for (std::size_t j = 0; j < rows_.size(); ++j) out.col(rows_[j]) += x.col(idx(j));
    return out;
  }
  // sum(Q .* X)
  double dot(const Matrix& x) const {
    if (!one_hot_) return q_.cwiseProduct(x).sum();
    double v = 0.0;
    for (std::size_t j = 0; j < rows_.size(); ++j) v += x(rows_[j], idx(j));
    return v;
  }

 private:
  const Matrix& q_;
  bool one_hot_ = true;
  std::vector<Index> rows_;
};

// The objective along (1 - t) P + t Q. Every term is a quadratic form in the
// iterate, so each piece expands in the basis (1-t)^2, t(1-t), t^2.
class LineModel {
 public:
  LineModel(const Problem& pr, const State& s, const AssignmentPair& q)
      : lambda_(pr.cfg.lambda), mu_(pr.cfg.mu) {
    const Direction q1(q.p1), q2(q.p2);
    q1g_ = q1.left(pr.ga);
    q2h_ = q2.left(pr.ha);
    q1gt_ = pr.sym_g ? q1g_ : q1.left(pr.ga.transpose());
    q2ht_ = pr.sym_h ? q2h_ : q2.left(pr.ha.transpose());
    b_ = q1.right_t(s.p1g);
    b_ += q1.right_t(s.p1gt).transpose();
    b_ -= q2.right_t(s.p2h);
    b_ -= q2.right_t(s.p2ht).transpose();
    c_ = q1.right_t(q1g_);
    c_ -= q2.right_t(q2h_);
    const Matrix& a = s.d;
    gram_ = {a.squaredNorm(), b_.squaredNorm(), c_.squaredNorm(), a.cwiseProduct(b_).sum(), a.cwiseProduct(c_).sum(),
             b_.cwiseProduct(c_).sum()};
    if (lambda_ > 0.0) {
      q1c_ = q1.left(pr.c);
      q2ct_ = q2.left(pr.c.transpose());
      lin_[0] = s.lin;
      lin_[1] = q2.dot(s.p1c) + q1.dot(s.p2ct);
      lin_[2] = q2.dot(q1c_);
    }
    if (mu_ != 0.0) {
      merge_[0] = s.merge;
      merge_[1] = q1.dot(s.p1g + s.p1gt) + q2.dot(s.p2h + s.p2ht);
      merge_[2] = q1.dot(q1gt_) + q2.dot(q2ht_);
    }
  }

  double operator()(double t) const {
    const double w0 = (1.0 - t) * (1.0 - t), w1 = t * (1.0 - t), w2 = t * t;
    double v = 0.0;
    if (lambda_ < 1.0) {
      const auto& g = gram_;
      v += (1.0 - lambda_) * (w0 * w0 * g[0] + w1 * w1 * g[1] + w2 * w2 * g[2] +
                              2.0 * (w0 * w1 * g[3] + w0 * w2 * g[4] + w1 * w2 * g[5]));
    }
    if (lambda_ > 0.0) v += lambda_ * (w0 * lin_[0] + w1 * lin_[1] + w2 * lin_[2]);
    if (mu_ != 0.0) v -= mu_ * (w0 * merge_[0] + w1 * merge_[1] + w2 * merge_[2]);
    return v;
  }

  // State at (1 - t) P + t Q, assembled from the stored products.
  State advance(const State& s, double t) const {
    const double w0 = (1.0 - t) * (1.0 - t), w1 = t * (1.0 - t), w2 = t * t;
    State n;
    n.p1g = (1.0 - t) * s.p1g + t * q1g_;
    n.p1gt = (1.0 - t) * s.p1gt + t * q1gt_;
    n.p2h = (1.0 - t) * s.p2h + t * q2h_;
    n.p2ht = (1.0 - t) * s.p2ht + t * q2ht_;
    n.d = w0 * s.d + w1 * b_ + w2 * c_;
    if (lambda_ < 1.0) n.f = (1.0 - lambda_) * n.d.squaredNorm();
    if (lambda_ > 0.0) {
      n.p1c = (1.0 - t) * s.p1c + t * q1c_;
      n.p2ct = (1.0 - t) * s.p2ct + t * q2ct_;
      n.lin = w0 * lin_[0] + w1 * lin_[1] + w2 * lin_[2];
      n.f += lambda_ * n.lin;
    }
    if (mu_ != 0.0) {
      n.merge = w0 * merge_[0] + w1 * merge_[1] + w2 * merge_[2];
      n.f -= mu_ * n.merge;
    }
    return n;
  }

 private:
  double lambda_;
  double mu_;
  Matrix q1g_, q2h_, q1gt_, q2ht_, q1c_, q2ct_;
  Matrix b_, c_;  // D(t) = (1-t)^2 A + t(1-t) B + t^2 C with A = D(0)
  // <A,A>, <B,B>, <C,C>, <A,B>, <A,C>, <B,C>
  std::array<double, 6> gram_{};
  std::array<double, 3> lin_{};
  std::array<double, 3> merge_{};
};

bool same_point(const AssignmentPair& p, const AssignmentPair& q) {
  return (q.p1 - p.p1).squaredNorm() + (q.p2 - p.p2).squaredNorm() == 0.0;
}

LineSearchResult stalled_at(double f) {
  LineSearchResult res;
  res.value = f;
  res.coeffs[0] = f;
  res.stalled = true;
  return res;
}

LineSearchResult search_along(const Problem& pr, const AssignmentPair& p, const State& s, const AssignmentPair& q) {
  if (same_point(p, q)) return stalled_at(s.f);
  const LineModel model(pr, s, q);
  return line_search([&](double t) { return model(t); });
}

}  // namespace

double objective(const Graph& g, const Graph& h, const Matrix& p1, const Matrix& p2, const SolverConfig& cfg) {
  check_dims(g, h, p1, p2, cfg);
  const Problem pr(g, h, cfg);
  return evaluate_state(pr, {p1, p2}).f;
}

AssignmentPair gradient(const Graph& g, const Graph& h, const Matrix& p1, const Matrix& p2, const SolverConfig& cfg) {
  check_dims(g, h, p1, p2, cfg);
  const Problem pr(g, h, cfg);
  return gradient_from(pr, evaluate_state(pr, {p1, p2}));
}

AssignmentPair fw_direction(const Matrix& grad1, const Matrix& grad2, const SolverConfig& cfg) {
  if (grad1.rows() != grad2.rows()) throw Error(Error::Code::kDimension, "gradient halves have different row counts");
  if (cfg.k_max == 0) throw Error(Error::Code::kInvalidArgument, "k_max must be positive");
  return {side_direction(grad1, cfg, Side::kG), side_direction(grad2, cfg, Side::kH)};
}

LineSearchResult minimize_quartic(const std::array<double, 5>& coeffs) {
  LineSearchResult res;
  res.coeffs = coeffs;
  const double scale = std::max(1.0, std::abs(coeffs[0]));
  double slope = 0.0;
  for (std::size_t k = 1; k < 5; ++k) slope = std::max(slope, std::abs(coeffs[k]));
  if (slope <= 1e-12 * scale) {
    res.alpha = 0.0;
    res.value = coeffs[0];
    res.stalled = true;
    return res;
  }
  std::vector<double> candidates{0.0, 1.0};
  for (double r : cubic_roots_in_unit(4.0 * coeffs[4], 3.0 * coeffs[3], 2.0 * coeffs[2], coeffs[1]))
    candidates.push_back(r);
  res.alpha = 0.0;
  res.value = coeffs[0];
  for (double a : candidates) {
    const double v = eval_poly(coeffs, a);
    if (v < res.value || (v == res.value && a < res.alpha)) {
      res.value = v;
      res.alpha = a;
    }
  }
  res.stalled = res.alpha == 0.0;
  return res;
}

LineSearchResult line_search(const std::function<double(double)>& phi) {
  static const Eigen::Matrix<double, 5, 5> kInverseVandermonde = [] {
    Eigen::Matrix<double, 5, 5> v;
    for (int i = 0; i < 5; ++i)
      for (int k = 0; k < 5; ++k) v(i, k) = std::pow(0.25 * i, k);
    return Eigen::Matrix<double, 5, 5>(v.inverse());
  }();
  Eigen::Matrix<double, 5, 1> values;
  for (int i = 0; i < 5; ++i) values(i) = phi(0.25 * i);
  const Eigen::Matrix<double, 5, 1> c = kInverseVandermonde * values;
  return minimize_quartic({c(0), c(1), c(2), c(3), c(4)});
}

LineSearchResult line_search(const Graph& g, const Graph& h, const AssignmentPair& p, const AssignmentPair& q,
                             const SolverConfig& cfg) {
  check_dims(g, h, p.p1, p.p2, cfg);
  if (q.p1.rows() != p.p1.rows() || q.p1.cols() != p.p1.cols() || q.p2.rows() != p.p2.rows() ||
      q.p2.cols() != p.p2.cols())
    throw Error(Error::Code::kDimension, "direction does not match the iterate");
  const Problem pr(g, h, cfg);
  return search_along(pr, p, evaluate_state(pr, p), q);
}

AssignmentPair initialize(std::size_t n_g, std::size_t n_h, const SolverConfig& cfg) {
  const std::size_t nk = std::min(n_g, n_h);
  if (nk == 0) throw Error(Error::Code::kInvalidArgument, "graphs must be non-empty");
  if (cfg.k_max * nk < std::max(n_g, n_h))
    throw Error(Error::Code::kInfeasible, "k_max too small for the initial assignment");
  AssignmentPair p;
  p.p1 = Matrix::Constant(idx(nk), idx(n_g), 1.0 / static_cast<double>(nk));
  p.p2 = Matrix::Zero(idx(nk), idx(n_h));
  for (std::size_t j = 0; j < n_h; ++j) p.p2(idx(j % nk), idx(j)) = 1.0;
  return p;
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kConverged: return "converged";
    case Termination::kStalled: return "stalled";
    case Termination::kMaxIterations: return "max_iterations";
  }
  return "unknown";
}

std::size_t SolveTrace::monotone_violations(double tol) const {
  std::size_t count = 0;
  double prev = initial_objective;
  for (const auto& it : iterations) {
    if (it.objective > prev + tol) ++count;
    prev = it.objective;
  }
  return count;
}

bool is_feasible(const AssignmentPair& p, const SolverConfig& cfg, double tol) {
  const double cap = static_cast<double>(cfg.k_max);
  for (const Matrix* m : {&p.p1, &p.p2}) {
    if (m->size() > 0 && (m->minCoeff() < -tol || m->maxCoeff() > 1.0 + tol)) return false;
    if (((m->colwise().sum().array() - 1.0).abs() > tol).any()) return false;
    if ((m->rowwise().sum().array() > cap + tol).any()) return false;
  }
  for (const Pin& pin : cfg.pinned) {
    const Matrix& m = pin.side == Side::kG ? p.p1 : p.p2;
    if (std::abs(m(idx(pin.row), idx(pin.vertex)) - 1.0) > tol) return false;
  }
  return true;
}

SolveTrace solve_relaxed(const Graph& g, const Graph& h, const SolverConfig& cfg) {
  constexpr std::size_t kRefreshEvery = 64;
  validate_problem(g, h, cfg);
  const std::size_t nk = cluster_rows(g, h);
  AssignmentPair p;
  if (cfg.init == Init::kCustom) {
    if (cfg.init_p1.rows() != idx(nk) || cfg.init_p1.cols() != idx(g.size()) || cfg.init_p2.rows() != idx(nk) ||
        cfg.init_p2.cols() != idx(h.size()))
      throw Error(Error::Code::kDimension, "custom initialisation has wrong dimensions");
    p = {cfg.init_p1, cfg.init_p2};
  } else {
    p = initialize(g.size(), h.size(), cfg);
  }
  p = enter_face(std::move(p), cfg);
  check_dims(g, h, p.p1, p.p2, cfg);

  const Problem pr(g, h, cfg);
  State state = evaluate_state(pr, p);
  SolveTrace trace;
  trace.initial_objective = state.f;
  trace.reason = Termination::kMaxIterations;

  for (std::size_t t = 0; t < cfg.max_iters; ++t) {
    // Periodic full evaluation bounds the round-off of the updates.
    if (t > 0 && t % kRefreshEvery == 0) state = evaluate_state(pr, p);
    const AssignmentPair grad = gradient_from(pr, state);
    const AssignmentPair q = fw_direction(grad.p1, grad.p2, cfg);
    const Matrix d1 = q.p1 - p.p1;
    const Matrix d2 = q.p2 - p.p2;
    const double gap = -(grad.p1.cwiseProduct(d1).sum() + grad.p2.cwiseProduct(d2).sum());

    std::optional<LineModel> model;
    if (!same_point(p, q)) model.emplace(pr, state, q);
    const LineSearchResult ls = model ? line_search([&](double a) { return (*model)(a); }) : stalled_at(state.f);
    const double f = state.f;
    double alpha = ls.alpha;
    if (alpha > 0.0) {
      AssignmentPair next{p.p1 + alpha * d1, p.p2 + alpha * d2};
      State next_state = model->advance(state, alpha);
      if (next_state.f <= f) {
        p = std::move(next);
        state = std::move(next_state);
      } else {
        // Interpolation round-off; keep the iterate.
        alpha = 0.0;
      }
    }
    trace.iterations.push_back({state.f, alpha, gap});
    if (alpha == 0.0) {
      trace.reason = Termination::kStalled;
      break;
    }
    const double change = std::abs(state.f - f) + alpha * (std::sqrt(d1.squaredNorm()) + std::sqrt(d2.squaredNorm()));
    if (change < cfg.epsilon) {
      trace.reason = Termination::kConverged;
      break;
    }
  }
  trace.solution = std::move(p);
  return trace;
}

}  // namespace mtm
