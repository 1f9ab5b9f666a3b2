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

#include "shapeboost/factorize.hpp"

#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "shapeboost/errors.hpp"

namespace shapeboost {

namespace {

Eigen::MatrixXd row_pinv(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return Eigen::MatrixXd::Zero(m.cols(), 0);
  return m.completeOrthogonalDecomposition().pseudoInverse();
}

void check_square_symmetric(const Eigen::MatrixXd& g) {
  if (g.rows() != g.cols()) throw InputError("Gram matrix is not square");
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, g.cwiseAbs().maxCoeff())) {
    throw InputError("Gram matrix is not symmetric");
  }
}

}  // namespace

std::string_view to_string(FactorMethod method) {
  return method == FactorMethod::Cholesky ? "cholesky" : "qr";
}

FactorMethod parse_factor_method(std::string_view name) {
  if (name == "cholesky") return FactorMethod::Cholesky;
  if (name == "qr") return FactorMethod::Qr;
  throw InputError("unknown factorization method '" + std::string(name) + "'");
}

GramRoot cholesky_root(const Eigen::MatrixXd& gram, double rel_tol) {
  check_square_symmetric(gram);
  const Eigen::Index p = gram.rows();
  Eigen::MatrixXd a = 0.5 * (gram + gram.transpose());
  const double tol = rel_tol * std::max(a.diagonal().maxCoeff(), 0.0);
  std::vector<Eigen::VectorXd> rows;
  std::vector<bool> used(static_cast<std::size_t>(p), false);
  for (Eigen::Index step = 0; step < p; ++step) {
    Eigen::Index piv = -1;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (!used[j] && (piv < 0 || a(j, j) > a(piv, piv))) piv = j;
    }
    if (piv < 0 || a(piv, piv) <= tol || a(piv, piv) <= 0.0) break;
    const Eigen::VectorXd col = a.col(piv) / std::sqrt(a(piv, piv));
    a.noalias() -= col * col.transpose();
    used[piv] = true;
    rows.push_back(col);
  }
  GramRoot r;
  r.m.resize(static_cast<Eigen::Index>(rows.size()), p);
  for (std::size_t i = 0; i < rows.size(); ++i) r.m.row(static_cast<Eigen::Index>(i)) = rows[i];
  r.m_pinv = row_pinv(r.m);
  return r;
}

GramRoot qr_root(const Eigen::MatrixXd& sqrt_design, double rel_tol) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sqrt_design);
  qr.setThreshold(std::sqrt(rel_tol));
  const Eigen::Index rank = qr.rank();
  const Eigen::MatrixXd r_full = qr.matrixR().topRows(std::min(sqrt_design.rows(), sqrt_design.cols()))
                                     .triangularView<Eigen::Upper>();
  GramRoot r;
  r.m = r_full.topRows(rank) * qr.colsPermutation().transpose();
  r.m_pinv = row_pinv(r.m);
  return r;
}

Eigen::MatrixXd Factorization::reconstruct(Eigen::Index rank) const {
  rank = std::min(rank, components());
  return directions.leftCols(rank) * scalar_coefs.leftCols(rank).transpose();
}

Factorization factorize(const Eigen::MatrixXd& theta, const GramRoot& root0,
                        const GramRoot& root1) {
  if (root0.m.cols() != theta.rows() || root1.m.cols() != theta.cols()) {
    throw InputError("Gram roots do not match the coefficient matrix");
  }
  const Eigen::MatrixXd xi = root0.m * theta * root1.m.transpose();
  Factorization f;
  f.total_variance = xi.squaredNorm();
  const Eigen::Index rank = std::min(xi.rows(), xi.cols());
  if (rank == 0) {
    f.directions.resize(theta.rows(), 0);
    f.scalar_coefs.resize(theta.cols(), 0);
    return f;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(xi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericalError("SVD of the factorization failed");
  f.singular_values = svd.singularValues();
  f.variance_shares = f.singular_values.array().square();
  f.directions = root0.m_pinv * svd.matrixU();
  f.scalar_coefs = root1.m_pinv * svd.matrixV() * f.singular_values.asDiagonal();
  // Sign: the first clearly nonzero direction coefficient is positive.
  for (Eigen::Index r = 0; r < rank; ++r) {
    const double big = f.directions.col(r).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < f.directions.rows(); ++i) {
      if (std::abs(f.directions(i, r)) > 1e-8 * big) {
        if (f.directions(i, r) < 0.0) {
          f.directions.col(r) *= -1.0;
          f.scalar_coefs.col(r) *= -1.0;
        }
        break;
      }
    }
  }
  return f;
}

Factorization factorize(const Eigen::MatrixXd& theta, const Eigen::MatrixXd& g0,
                        const Eigen::MatrixXd& g1) {
  return factorize(theta, cholesky_root(g0), cholesky_root(g1));
}

Eigen::MatrixXd product_sqrt_design(const FittedModel& model,
                                    const std::vector<CurveSample>& sample) {
  Eigen::Index rows = 0;
  for (const CurveSample& s : sample) rows += 2 * s.size();
  Eigen::MatrixXd out(rows, model.space.m());
  const double scale = 1.0 / std::sqrt(static_cast<double>(sample.size()));
  Eigen::Index r0 = 0;
  for (const CurveSample& s : sample) {
    const CurveCache cache = model.space.cache(s.grid, s.weights);
    const Eigen::MatrixXd root = s.weights.sqrt_factor() * scale;
    out.middleRows(r0, s.size()) = root * cache.raw_design.real();
    out.middleRows(r0 + s.size(), s.size()) = root * cache.raw_design.imag();
    r0 += 2 * s.size();
  }
  return out;
}

Factorization factorize_effect(const FittedModel& model, std::size_t effect, FactorMethod method,
                               const std::vector<CurveSample>* sample,
                               const CovariateTable* table) {
  if (effect >= model.effects.size()) throw InputError("effect index out of range");
  Eigen::Index offset = 0;
  for (std::size_t j = 0; j < effect; ++j) offset += model.effects[j].theta.cols();
  const FittedEffect& e = model.effects[effect];
  const Eigen::Index mj = e.theta.cols();
  if (method == FactorMethod::Cholesky) {
    return factorize(e.theta, model.g0, model.covariate_gram.block(offset, offset, mj, mj));
  }
  if (!sample || !table) throw InputError("the qr factorization needs the training data");
  const Eigen::MatrixXd s1 =
      e.basis.design(*table) / std::sqrt(static_cast<double>(table->rows()));
  return factorize(e.theta, qr_root(product_sqrt_design(model, *sample)), qr_root(s1));
}

Factorization factorize_predictor(const FittedModel& model) {
  Eigen::Index total = 0;
  for (const FittedEffect& e : model.effects) total += e.theta.cols();
  Eigen::MatrixXd theta(model.space.m(), total);
  Eigen::Index offset = 0;
  for (const FittedEffect& e : model.effects) {
    theta.middleCols(offset, e.theta.cols()) = e.theta;
    offset += e.theta.cols();
  }
  Factorization f = factorize(theta, model.g0, model.covariate_gram);
  f.effect_variance.resize(static_cast<Eigen::Index>(model.effects.size()), f.components());
  offset = 0;
  for (std::size_t j = 0; j < model.effects.size(); ++j) {
    const Eigen::Index mj = model.effects[j].theta.cols();
    const Eigen::MatrixXd g = model.covariate_gram.block(offset, offset, mj, mj);
    for (Eigen::Index r = 0; r < f.components(); ++r) {
      const Eigen::VectorXd u = f.scalar_coefs.col(r).segment(offset, mj);
      f.effect_variance(static_cast<Eigen::Index>(j), r) = u.dot(g * u);
    }
    f.effect_names.push_back(model.effects[j].basis.spec.name);
    offset += mj;
  }
  return f;
}

DirectionVisual direction_visual(const ResponseSpace& space, const Eigen::VectorXd& direction,
                                 double tau, Eigen::Index points) {
  if (points < 3) throw InputError("direction plots need at least 3 points");
  if (direction.size() != space.m()) throw InputError("direction length does not match the space");
  DirectionVisual v;
  InnerProduct ip;
  if (space.basis().config().cyclic) {
    v.grid = Eigen::VectorXd::LinSpaced(points, 0.0, 1.0 - 1.0 / static_cast<double>(points));
    ip = InnerProduct::diagonal(uniform_weights(points));
  } else {
    v.grid = landmark_grid(points);
    ip = InnerProduct::diagonal(trapezoid_weights(v.grid));
  }
  const CurveCache cache = space.cache(v.grid, ip);
  v.pole = cache.pole_rep;
  const Eigen::VectorXcd beta = tau * (cache.design * direction.cast<Complex>());
  v.displaced = exp_at_representative(cache.pole_rep, beta, ip, space.kind());
  return v;
}

double default_tau(const std::vector<Factorization>& effects) {
  double tau = 0.0;
  for (const Factorization& f : effects) tau = std::max(tau, std::sqrt(f.total_variance));
  return tau;
}

}  // namespace shapeboost
