// Copyright 2026 The shapeboost Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "shapeboost/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "shapeboost/errors.hpp"

namespace shapeboost {

std::string_view to_string(KnotRule rule) {
  return rule == KnotRule::Quantile ? "quantile" : "equidistant";
}

KnotRule parse_knot_rule(std::string_view name) {
  if (name == "quantile") return KnotRule::Quantile;
  if (name == "equidistant") return KnotRule::Equidistant;
  throw InputError("unknown knot rule '" + std::string(name) + "'");
}

std::string_view to_string(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::None:
      return "none";
    case PenaltyKind::Ridge:
      return "ridge";
    case PenaltyKind::SecondDiff:
      return "second_diff";
  }
  return "none";
}

PenaltyKind parse_penalty(std::string_view name) {
  if (name == "none") return PenaltyKind::None;
  if (name == "ridge") return PenaltyKind::Ridge;
  if (name == "second_diff") return PenaltyKind::SecondDiff;
  throw InputError("unknown penalty '" + std::string(name) + "'");
}

BSplineBasis BSplineBasis::build(const SplineConfig& cfg, std::span<const double> observed,
                                 double lo, double hi) {
  if (cfg.n_knots < 0) throw InputError("n_knots must be nonnegative");
  if (!(hi > lo)) throw InputError("spline domain is empty");
  Eigen::VectorXd interior(cfg.n_knots);
  if (cfg.knot_rule == KnotRule::Equidistant) {
    for (int l = 0; l < cfg.n_knots; ++l) {
      interior[l] = lo + (hi - lo) * (l + 1) / static_cast<double>(cfg.n_knots + 1);
    }
  } else {
    std::vector<double> t(observed.begin(), observed.end());
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    if (static_cast<int>(t.size()) < cfg.n_knots + 2) {
      throw InputError("too few distinct observations (" + std::to_string(t.size()) +
                       ") for " + std::to_string(cfg.n_knots) + " quantile knots");
    }
    // Type-7 quantiles of the distinct values.
    const double last = static_cast<double>(t.size() - 1);
    for (int l = 0; l < cfg.n_knots; ++l) {
      const double h = last * (l + 1) / static_cast<double>(cfg.n_knots + 1);
      const auto a = static_cast<std::size_t>(std::floor(h));
      const double frac = h - static_cast<double>(a);
      interior[l] = a + 1 < t.size() ? t[a] + frac * (t[a + 1] - t[a]) : t[a];
    }
  }
  return from_knots(cfg, std::move(interior), lo, hi);
}

BSplineBasis BSplineBasis::from_knots(const SplineConfig& cfg, Eigen::VectorXd interior, double lo,
                                      double hi) {
  if (cfg.degree < 0) throw InputError("spline degree must be nonnegative");
  if (interior.size() != cfg.n_knots) throw InputError("knot count does not match configuration");
  for (Eigen::Index l = 0; l < interior.size(); ++l) {
    const double prev = l == 0 ? lo : interior[l - 1];
    if (!(interior[l] > prev) || !(interior[l] < hi)) {
      throw InputError("interior knots must be strictly increasing inside the domain");
    }
  }
  BSplineBasis b;
  b.cfg_ = cfg;
  b.interior_ = std::move(interior);
  b.lo_ = lo;
  b.hi_ = hi;
  b.init();
  return b;
}

void BSplineBasis::init() {
  const int d = cfg_.degree;
  const Eigen::Index n = interior_.size();
  if (!cfg_.cyclic) {
    dim_ = n + d + 1;
    knots_.resize(n + 2 * (d + 1));
    knots_.head(d + 1).setConstant(lo_);
    knots_.segment(d + 1, n) = interior_;
    knots_.tail(d + 1).setConstant(hi_);
    return;
  }
  const Eigen::Index intervals = n + 1;
  if (intervals < d + 1) {
    throw InputError("cyclic basis needs at least degree + 1 knot intervals");
  }
  dim_ = intervals;
  Eigen::VectorXd brk(intervals);
  brk[0] = lo_;
  brk.tail(n) = interior_;
  const double period = hi_ - lo_;
  // Extended knots u_j for j = -d .. intervals + d, stored at offset d.
  knots_.resize(intervals + 2 * d + 1);
  for (Eigen::Index j = -d; j <= intervals + d; ++j) {
    const Eigen::Index q = j >= 0 ? j / intervals : -((-j + intervals - 1) / intervals);
    const Eigen::Index r = j - q * intervals;
    knots_[j + d] = brk[r] + static_cast<double>(q) * period;
  }
}

Eigen::Index BSplineBasis::span(double x) const {
  const int d = cfg_.degree;
  // Valid spans cover [knots_[d], knots_[last]).
  const Eigen::Index first = d;
  const Eigen::Index last = cfg_.cyclic ? dim_ + d - 1 : dim_ - 1;
  const double* begin = knots_.data() + first;
  const double* end = knots_.data() + last + 1;
  const double* it = std::upper_bound(begin, end, x);
  Eigen::Index k = (it - knots_.data()) - 1;
  return std::clamp(k, first, last);
}

Eigen::RowVectorXd BSplineBasis::row(double x) const {
  const int d = cfg_.degree;
  if (cfg_.cyclic) {
    const double period = hi_ - lo_;
    x = lo_ + std::fmod(x - lo_, period);
    if (x < lo_) x += period;
    if (x >= hi_) x = lo_;
  } else {
    x = std::clamp(x, lo_, hi_);
  }
  const Eigen::Index k = span(x);
  // Cox-de Boor recursion for the d + 1 nonzero functions.
  std::vector<double> n(d + 1, 0.0), left(d + 1), right(d + 1);
  n[0] = 1.0;
  for (int j = 1; j <= d; ++j) {
    left[j] = x - knots_[k + 1 - j];
    right[j] = knots_[k + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double denom = right[r + 1] + left[j - r];
      const double tmp = denom > 0.0 ? n[r] / denom : 0.0;
      n[r] = saved + right[r + 1] * tmp;
      saved = left[j - r] * tmp;
    }
    n[j] = saved;
  }
  Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(dim_);
  for (int r = 0; r <= d; ++r) {
    Eigen::Index idx = k - d + r;
    if (cfg_.cyclic) idx = ((idx - d) % dim_ + dim_) % dim_;
    out[idx] += n[r];
  }
  return out;
}

Eigen::MatrixXd BSplineBasis::design(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::MatrixXd out(x.size(), dim_);
  for (Eigen::Index i = 0; i < x.size(); ++i) out.row(i) = row(x[i]);
  return out;
}

Eigen::MatrixXd second_difference(Eigen::Index dim, bool cyclic) {
  if (cyclic) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim, dim);
    if (dim < 3) return d;
    for (Eigen::Index j = 0; j < dim; ++j) {
      d(j, (j + dim - 1) % dim) += 1.0;
      d(j, j) -= 2.0;
      d(j, (j + 1) % dim) += 1.0;
    }
    return d;
  }
  if (dim < 3) return Eigen::MatrixXd::Zero(0, dim);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim - 2, dim);
  for (Eigen::Index j = 0; j + 2 < dim; ++j) {
    d(j, j) = 1.0;
    d(j, j + 1) = -2.0;
    d(j, j + 2) = 1.0;
  }
  return d;
}

Eigen::MatrixXd BSplineBasis::penalty(PenaltyKind kind) const {
  switch (kind) {
    case PenaltyKind::None:
      return Eigen::MatrixXd::Zero(dim_, dim_);
    case PenaltyKind::Ridge:
      return Eigen::MatrixXd::Identity(dim_, dim_);
    case PenaltyKind::SecondDiff: {
      const Eigen::MatrixXd d = second_difference(dim_, cfg_.cyclic);
      return d.transpose() * d;
    }
  }
  return Eigen::MatrixXd::Zero(dim_, dim_);
}

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  // Golub-Welsch: eigen-decomposition of the Jacobi matrix.
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jac(k, k - 1) = b;
    jac(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  nodes = es.eigenvalues();
  weights = 2.0 * es.eigenvectors().row(0).transpose().array().square();
}

Eigen::MatrixXd BSplineBasis::gram() const {
  Eigen::VectorXd nodes, weights;
  gauss_legendre(cfg_.degree + 1, nodes, weights);
  std::vector<double> brk{lo_};
  for (Eigen::Index l = 0; l < interior_.size(); ++l) brk.push_back(interior_[l]);
  brk.push_back(hi_);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim_, dim_);
  for (std::size_t a = 0; a + 1 < brk.size(); ++a) {
    const double half = 0.5 * (brk[a + 1] - brk[a]);
    const double mid = 0.5 * (brk[a + 1] + brk[a]);
    for (Eigen::Index q = 0; q < nodes.size(); ++q) {
      const Eigen::RowVectorXd r = row(mid + half * nodes[q]);
      g.noalias() += (half * weights[q]) * r.transpose() * r;
    }
  }
  return g;
}

}  // namespace shapeboost
