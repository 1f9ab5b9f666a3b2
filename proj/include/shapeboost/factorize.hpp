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

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "shapeboost/boost.hpp"

namespace shapeboost {

enum class FactorMethod { Cholesky, Qr };

std::string_view to_string(FactorMethod method);
FactorMethod parse_factor_method(std::string_view name);

/// M with G = M^T M, reduced to the positive part of G, and its
/// Moore-Penrose inverse.
struct GramRoot {
  Eigen::MatrixXd m;       // rank x p
  Eigen::MatrixXd m_pinv;  // p x rank
  Eigen::Index rank() const { return m.rows(); }
};

/// Pivoted Cholesky root of a symmetric nonnegative-definite Gram matrix.
GramRoot cholesky_root(const Eigen::MatrixXd& gram, double rel_tol = 1e-12);
/// Root from the R factor of a pivoted QR of a square-root design S (G = S^T S).
GramRoot qr_root(const Eigen::MatrixXd& sqrt_design, double rel_tol = 1e-12);

struct Factorization {
  Eigen::MatrixXd directions;        // m x R, orthonormal under G_0
  Eigen::VectorXd singular_values;   // non-increasing
  Eigen::MatrixXd scalar_coefs;      // covariate coefficients of h^(r), variance d_r^2
  Eigen::VectorXd variance_shares;   // d_r^2
  double total_variance = 0.0;
  /// Predictor factorizations only: variance of each effect's part of h^(r),
  /// effects x R.
  Eigen::MatrixXd effect_variance;
  std::vector<std::string> effect_names;

  Eigen::Index components() const { return singular_values.size(); }
  /// Sum of the first `rank` components as an m x m_j coefficient matrix.
  Eigen::MatrixXd reconstruct(Eigen::Index rank) const;
};

/// Xi = M_0 Theta M_1^T = V_0 D V_1^T, directions M_0^+ V_0 and scalar
/// coefficients M_1^+ V_1 D.
Factorization factorize(const Eigen::MatrixXd& theta, const GramRoot& root0,
                        const GramRoot& root1);
/// Cholesky variant from the two Gram matrices.
Factorization factorize(const Eigen::MatrixXd& theta, const Eigen::MatrixXd& g0,
                        const Eigen::MatrixXd& g1);

/// Rows sqrt(W_i / n) Re/Im D_i of the tangent designs; S^T S equals the
/// model's G_0 on the training sample.
Eigen::MatrixXd product_sqrt_design(const FittedModel& model,
                                    const std::vector<CurveSample>& sample);

/// Factorization of one fitted effect with the empirical Grams stored in the
/// model. The QR variant needs the training sample and covariates.
Factorization factorize_effect(const FittedModel& model, std::size_t effect,
                               FactorMethod method = FactorMethod::Cholesky,
                               const std::vector<CurveSample>* sample = nullptr,
                               const CovariateTable* table = nullptr);

/// Factorization of the joint predictor over the concatenated covariate bases.
Factorization factorize_predictor(const FittedModel& model);

struct DirectionVisual {
  Eigen::VectorXd grid;
  Eigen::VectorXcd pole;       // pole representative
  Eigen::VectorXcd displaced;  // Exp_p(tau xi); segment k joins pole[k] and displaced[k]
};

DirectionVisual direction_visual(const ResponseSpace& space, const Eigen::VectorXd& direction,
                                 double tau, Eigen::Index points = 200);

/// max_j sqrt(total variance of effect j).
double default_tau(const std::vector<Factorization>& effects);

}  // namespace shapeboost
