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

#include "shapeboost/basis.hpp"

#include <spdlog/spdlog.h>

#include "shapeboost/errors.hpp"

namespace shapeboost {

Eigen::VectorXcd PoleCoef::evaluate(const BSplineBasis& basis, const Eigen::VectorXd& grid) const {
  if (coef.size() != basis.dim()) throw InputError("pole coefficients do not match the basis");
  return basis.design(grid).cast<Complex>() * coef;
}

Eigen::MatrixXcd TangentTransform::complex_coef() const {
  const Eigen::Index n0 = m0();
  Eigen::MatrixXcd out(n0, m());
  out.real() = z.topRows(n0);
  out.imag() = z.bottomRows(n0);
  return out;
}

Eigen::MatrixXd constraint_matrix(const std::vector<CurveSample>& sample,
                                  const BSplineBasis& basis, const PoleCoef& pole,
                                  GeometryKind kind) {
  if (sample.empty()) throw InputError("constraint matrix needs at least one curve");
  const Eigen::Index m0 = basis.dim();
  const Eigen::Index rows = kind == GeometryKind::Form ? 3 : 4;
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(rows, m0);
  for (const CurveSample& s : sample) {
    const InnerProduct& ip = s.weights;
    const Eigen::MatrixXd b = basis.design(s.grid);
    const Eigen::VectorXcd p = pole_representative(pole.evaluate(basis, s.grid), ip, kind);
    const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(s.size());
    const Complex i(0.0, 1.0);
    // <b_l, zeta> = b_l^T W zeta for real b_l.
    const Eigen::VectorXcd w1 = ip.apply(ones);
    const Eigen::VectorXcd wp = ip.apply(p);
    const Eigen::MatrixXcd bt = b.transpose().cast<Complex>();
    c.row(0) += (bt * w1).transpose();
    c.row(1) += (bt * (i * w1)).transpose();
    c.row(2) += (bt * (i * wp)).transpose();
    if (kind == GeometryKind::Shape) c.row(3) += (bt * wp).transpose();
  }
  c /= static_cast<double>(sample.size());
  Eigen::MatrixXd out(rows, 2 * m0);
  out << c.real(), c.imag();
  return out;
}

TangentTransform nullspace_transform(const Eigen::MatrixXd& c_real) {
  const Eigen::Index cols = c_real.cols();
  TangentTransform t;
  if (c_real.rows() == 0 || c_real.cwiseAbs().maxCoeff() == 0.0) {
    t.z = Eigen::MatrixXd::Identity(cols, cols);
    return t;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c_real, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double threshold = 1e-10 * sv[0];
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv[rank] > threshold) ++rank;
  if (rank < c_real.rows()) {
    spdlog::warn("constraint matrix has rank {} < {} rows; keeping {} directions", rank,
                 c_real.rows(), cols - rank);
  }
  t.z = svd.matrixV().rightCols(cols - rank);
  return t;
}

Eigen::MatrixXcd tangent_design(const Eigen::MatrixXd& basis_rows,
                                const TangentTransform& transform) {
  const Eigen::Index m0 = transform.m0();
  if (basis_rows.cols() != m0) throw InputError("design does not match the transform");
  Eigen::MatrixXcd out(basis_rows.rows(), transform.m());
  out.real() = basis_rows * transform.z.topRows(m0);
  out.imag() = basis_rows * transform.z.bottomRows(m0);
  return out;
}

Eigen::MatrixXcd tangent_design(const BSplineBasis& basis, const Eigen::VectorXd& grid,
                                const TangentTransform& transform) {
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) throw InputError("grid values must lie in [0, 1]");
  }
  return tangent_design(basis.design(grid), transform);
}

Eigen::MatrixXd transformed_penalty(const Eigen::MatrixXd& p0, const TangentTransform& transform) {
  const Eigen::Index m0 = transform.m0();
  if (p0.rows() != m0 || p0.cols() != m0) throw InputError("penalty does not match the transform");
  const Eigen::MatrixXd top = transform.z.topRows(m0);
  const Eigen::MatrixXd bottom = transform.z.bottomRows(m0);
  Eigen::MatrixXd out = top.transpose() * p0 * top + bottom.transpose() * p0 * bottom;
  return 0.5 * (out + out.transpose());
}

Eigen::VectorXcd pooled_spline_fit(const std::vector<Eigen::MatrixXd>& designs,
                                   const std::vector<Eigen::VectorXcd>& values,
                                   const std::vector<InnerProduct>& weights,
                                   const Eigen::MatrixXd& penalty, double relative_lambda) {
  if (designs.empty()) throw InputError("pooled fit needs at least one curve");
  const Eigen::Index m0 = designs.front().cols();
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(m0, m0);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(m0);
  for (std::size_t i = 0; i < designs.size(); ++i) {
    const Eigen::MatrixXcd b = designs[i].cast<Complex>();
    lhs += weights[i].real_gram(b);
    rhs += designs[i].transpose() * weights[i].apply(values[i]);
  }
  const double tp = penalty.trace();
  if (tp > 0.0) lhs += (relative_lambda * lhs.trace() / tp) * penalty;
  // A tiny ridge keeps basis functions without support in the data defined.
  lhs.diagonal().array() += 1e-12 * std::max(lhs.trace() / m0, 1e-300);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(lhs);
  Eigen::VectorXcd out(m0);
  out.real() = ldlt.solve(rhs.real());
  out.imag() = ldlt.solve(rhs.imag());
  return out;
}

}  // namespace shapeboost
