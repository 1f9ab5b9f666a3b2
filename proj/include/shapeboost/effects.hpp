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

// Penalized least squares for tensor-product base-learners: normal
// equations, Kronecker penalties, solvers and degrees-of-freedom calibration.
//
// Coefficients are vectorized column-major, theta(r, l) at r + m * l, so the
// response direction index r runs fastest.

#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "shapeboost/geometry.hpp"

namespace shapeboost {

struct NormalEquations {
  Eigen::MatrixXd lhs;  // Psi_j
  Eigen::VectorXd rhs;  // psi_j
};

/// Psi_j = sum_i (b_i b_i^T) (x) G_i over the listed rows (all when empty).
Eigen::MatrixXd assemble_psi_matrix(const std::vector<Eigen::MatrixXd>& curve_grams,
                                    const Eigen::MatrixXd& covariate_design,
                                    std::span<const Eigen::Index> rows = {});
/// psi_j = vec(sum_i g_i b_i^T) with g_i = Re(D_i^H W_i eps_i) stored as columns.
Eigen::VectorXd assemble_psi_vector(const Eigen::MatrixXd& curve_cross,
                                    const Eigen::MatrixXd& covariate_design,
                                    std::span<const Eigen::Index> rows = {});

/// Normal equations straight from tangent designs and residuals.
NormalEquations assemble_normal_eqs(const std::vector<Eigen::MatrixXcd>& tangent_designs,
                                    const std::vector<InnerProduct>& weights,
                                    const Eigen::MatrixXd& covariate_design,
                                    const std::vector<Eigen::VectorXcd>& residuals);

/// lambda_j (P_j (x) I_m) + lambda_perp (I_mj (x) P_perp).
Eigen::MatrixXd kron_penalty(const Eigen::MatrixXd& p_j, const Eigen::MatrixXd& p_perp,
                             double lambda_j, double lambda_perp);

/// Solver for a fixed system matrix Psi + R. Uses LDLT with symmetric
/// pivoting and falls back to an eigen-decomposition pseudo-inverse when the
/// system is numerically singular.
class PlsSolver {
 public:
  PlsSolver() = default;
  explicit PlsSolver(const Eigen::MatrixXd& system);

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  /// Explicit (pseudo-)inverse of the system.
  Eigen::MatrixXd inverse() const;
  bool pseudo_inverse() const { return pseudo_; }
  Eigen::Index size() const { return size_; }

 private:
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  Eigen::MatrixXd pinv_;
  bool pseudo_ = false;
  Eigen::Index size_ = 0;
};

struct PlsResult {
  Eigen::MatrixXd theta;  // m x m_j
  bool pseudo_inverse = false;
};

PlsResult pls_solve(const Eigen::MatrixXd& psi, const Eigen::VectorXd& rhs,
                    const Eigen::MatrixXd& penalty, Eigen::Index m);

/// Combined unscaled penalty P_j (x) I_m + I_mj (x) P_perp with eigenvalues
/// lifted to at least rel_ridge times the largest one.
Eigen::MatrixXd augmented_penalty(const Eigen::MatrixXd& p_j, const Eigen::MatrixXd& p_perp,
                                  double rel_ridge = 1e-8);

/// trace[(Psi + lambda P)^{-1} Psi] for symmetric positive-definite P.
double effective_df(const Eigen::MatrixXd& psi, const Eigen::MatrixXd& penalty, double lambda);

struct DfCalibration {
  double lambda = 0.0;
  double df = 0.0;
  bool clamped = false;
  Eigen::MatrixXd penalty;  // augmented combined penalty, scaled by lambda in the fit
};

/// Finds lambda with df(lambda) = df_target by bisection on log10(lambda)
/// in [-20, 30]. Targets at or above rank(Psi) give lambda = 0.
DfCalibration df_to_lambda(const Eigen::MatrixXd& psi, const Eigen::MatrixXd& p_j,
                           const Eigen::MatrixXd& p_perp, double df_target);

}  // namespace shapeboost
