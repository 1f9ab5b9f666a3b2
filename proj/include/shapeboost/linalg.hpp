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

// Small dense linear-algebra helpers.

#pragma once

#include <Eigen/Dense>

namespace shapeboost {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Column-major vectorization: entry (r, l) goes to r + rows * l.
Eigen::VectorXd vec(const Eigen::MatrixXd& a);
Eigen::MatrixXd unvec(const Eigen::VectorXd& v, Eigen::Index rows);

/// Pseudo-inverse of a symmetric matrix, dropping eigenvalues below
/// rel_tol * largest.
Eigen::MatrixXd symmetric_pinv(const Eigen::MatrixXd& a, double rel_tol = 1e-12);

/// Numerical rank of a symmetric positive semidefinite matrix.
Eigen::Index psd_rank(const Eigen::MatrixXd& a, double rel_tol = 1e-10);

}  // namespace shapeboost
