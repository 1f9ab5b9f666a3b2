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

// Response-side bases: the pole as spline coefficients, the tangent-space
// constraint transform Z_p and tangent direction designs.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "shapeboost/bspline.hpp"
#include "shapeboost/geometry.hpp"

namespace shapeboost {

/// The pole as complex coefficients in the response basis.
struct PoleCoef {
  Eigen::VectorXcd coef;

  Eigen::VectorXcd evaluate(const BSplineBasis& basis, const Eigen::VectorXd& grid) const;
};

/// Real 2 m0 x m matrix with orthonormal columns. Column r holds the real
/// (rows 0..m0-1) and imaginary (rows m0..2m0-1) coefficients of the
/// tangent direction d_r.
struct TangentTransform {
  Eigen::MatrixXd z;

  Eigen::Index m() const { return z.cols(); }
  Eigen::Index m0() const { return z.rows() / 2; }
  /// Complex m0 x m coefficient matrix of the directions.
  Eigen::MatrixXcd complex_coef() const;
};

/// Rows (Re C, Im C) with C(r, l) the sample average of <b_l, zeta_r>_i, where
/// zeta = 1, i1, ip (and p for shapes) use each curve's pole representative.
Eigen::MatrixXd constraint_matrix(const std::vector<CurveSample>& sample,
                                  const BSplineBasis& basis, const PoleCoef& pole,
                                  GeometryKind kind);

/// Orthonormal null-space basis of c_real. Returns the identity when
/// c_real has no rows or is zero.
TangentTransform nullspace_transform(const Eigen::MatrixXd& c_real);

/// Complex k x m design whose column r evaluates d_r at the rows of
/// `basis_rows` (a k x m0 real spline design).
Eigen::MatrixXcd tangent_design(const Eigen::MatrixXd& basis_rows,
                                const TangentTransform& transform);
Eigen::MatrixXcd tangent_design(const BSplineBasis& basis, const Eigen::VectorXd& grid,
                                const TangentTransform& transform);

/// Z^T (I_2 (x) P0) Z.
Eigen::MatrixXd transformed_penalty(const Eigen::MatrixXd& p0, const TangentTransform& transform);

/// Least-squares spline coefficients of a complex function observed on
/// several grids, with a small roughness penalty for stability.
Eigen::VectorXcd pooled_spline_fit(const std::vector<Eigen::MatrixXd>& designs,
                                   const std::vector<Eigen::VectorXcd>& values,
                                   const std::vector<InnerProduct>& weights,
                                   const Eigen::MatrixXd& penalty, double relative_lambda);

}  // namespace shapeboost
