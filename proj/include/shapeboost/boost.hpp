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

// Component-wise Riemannian L2-Boosting: pole estimation, the boosting
// loop, curve-wise cross-validation, prediction and risk evaluation.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "shapeboost/basis.hpp"
#include "shapeboost/covariates.hpp"
#include "shapeboost/effects.hpp"
#include "shapeboost/geometry.hpp"

namespace shapeboost {

enum class WeightRule { Trapezoid, Uniform, Column, Gram };

std::string_view to_string(WeightRule rule);
WeightRule parse_weight_rule(std::string_view name);

struct PoleOptions {
  int align_rounds = 3;             // Procrustes rounds for the preliminary mean
  double smoothing = 1e-4;          // relative roughness penalty of pooled fits
  int max_iterations = 50;          // intercept-only boosting steps per round
  int max_rounds = 8;               // re-expression rounds
  double stationarity = 1e-10;      // |mean residual| / mean |residual|
  double relative_change = 1e-8;    // stagnation of the mean residual norm
};

struct BoostConfig {
  GeometryKind kind = GeometryKind::Form;
  SplineConfig response{.degree = 3, .n_knots = 27, .cyclic = true, .knot_rule = KnotRule::Quantile};
  PenaltyKind response_penalty = PenaltyKind::SecondDiff;
  WeightRule weights = WeightRule::Trapezoid;
  /// Basis whose Gram matrix supplies full weights in gram mode.
  std::optional<SplineConfig> gram_basis;
  std::vector<EffectSpec> effects;
  double eta = 0.1;
  int iterations = 100;
  int folds = 10;
  std::uint64_t seed = 1;
  int threads = 1;
  PoleOptions pole;

  void validate() const;
};

/// Per-curve quantities that stay fixed while boosting.
struct CurveCache {
  Eigen::VectorXcd pole_rep;
  Eigen::MatrixXd basis_rows;   // k x m0 response spline design
  Eigen::MatrixXcd raw_design;  // k x m tangent design before projection
  Eigen::MatrixXcd design;      // projected onto this curve's tangent space
  Eigen::MatrixXd stacked;      // [Re; Im] of `design`, 2k x m
  Eigen::MatrixXd gram;         // Re(D^H W D) of the projected design
};

/// Response basis, pole and tangent transform.
class ResponseSpace {
 public:
  ResponseSpace() = default;
  /// Computes Z_p from the sample.
  ResponseSpace(GeometryKind kind, BSplineBasis basis, PenaltyKind penalty, PoleCoef pole,
                const std::vector<CurveSample>& sample);
  /// Restores a stored space.
  ResponseSpace(GeometryKind kind, BSplineBasis basis, PenaltyKind penalty, PoleCoef pole,
                TangentTransform transform);

  CurveCache cache(const Eigen::VectorXd& grid, const InnerProduct& ip) const;

  GeometryKind kind() const { return kind_; }
  const BSplineBasis& basis() const { return basis_; }
  PenaltyKind penalty_kind() const { return penalty_; }
  const PoleCoef& pole() const { return pole_; }
  const TangentTransform& transform() const { return transform_; }
  Eigen::Index m() const { return transform_.m(); }
  /// P_perp = Z^T (I_2 (x) P_0) Z.
  const Eigen::MatrixXd& penalty() const { return p_perp_; }

 private:
  void finish();

  GeometryKind kind_ = GeometryKind::Form;
  BSplineBasis basis_;
  PenaltyKind penalty_ = PenaltyKind::SecondDiff;
  PoleCoef pole_;
  TangentTransform transform_;
  Eigen::MatrixXd p_perp_;
};

/// Fit state of one curve at tangent coefficient vector c.
struct CurveState {
  Eigen::VectorXcd mean;      // representative of Exp_p(h)
  Eigen::VectorXcd residual;  // transported to the pole
  double sq_dist = 0.0;
};

CurveState evaluate_curve(const CurveSample& y, const CurveCache& cache, const Eigen::VectorXd& c,
                          GeometryKind kind);
/// Squared geodesic distance only (no transport).
/// Re(D^H W e) with the cached projected design.
Eigen::VectorXd tangent_cross(const CurveCache& cache, const InnerProduct& ip,
                              const Eigen::VectorXcd& e);

double curve_sq_dist(const CurveSample& y, const CurveCache& cache, const Eigen::VectorXd& c,
                     GeometryKind kind);

/// Preliminary pole: Procrustes-aligned pooled spline mean.
PoleCoef preliminary_pole(const std::vector<CurveSample>& sample, GeometryKind kind,
                          const BSplineBasis& basis, PenaltyKind penalty,
                          const PoleOptions& options);

/// Fréchet mean by intercept-only boosting from the preliminary pole.
PoleCoef estimate_pole(const std::vector<CurveSample>& sample, GeometryKind kind,
                       const BSplineBasis& basis, PenaltyKind penalty,
                       const PoleOptions& options, int threads = 1);

/// Norm of the least-squares constant tangent fit to the transported
/// residuals, relative to their mean norm (0 when all residuals vanish).
double frechet_stationarity(const std::vector<CurveSample>& sample, const ResponseSpace& space);

struct Learner {
  CovariateBasis basis;
  Eigen::MatrixXd design;  // n x m_j on the full sample
  DfCalibration calibration;
};

/// Everything fixed across boosting runs and CV folds.
struct PreparedData {
  const std::vector<CurveSample>* sample = nullptr;
  BoostConfig config;
  ResponseSpace space;
  std::vector<CurveCache> caches;
  std::vector<Learner> learners;
};

PreparedData prepare(const std::vector<CurveSample>& sample, const CovariateTable& covariates,
                     const BoostConfig& config, std::optional<PoleCoef> pole = std::nullopt);

struct BoostingRun {
  std::vector<Eigen::MatrixXd> theta;
  std::vector<double> risk;          // training, length iterations + 1
  std::vector<double> holdout_risk;  // mean squared distance of held-out curves
  std::vector<int> selection;        // chosen learner per iteration
  std::vector<std::vector<double>> sse;  // per iteration, per learner
  std::vector<Eigen::VectorXcd> fitted_mean;  // final means of the training curves
};

/// Runs `iterations` boosting steps on the training rows; held-out rows are
/// only evaluated. Empty `train` means all curves.
BoostingRun run_boosting(const PreparedData& data, const std::vector<Eigen::Index>& train,
                         const std::vector<Eigen::Index>& holdout, int iterations);

struct CvResult {
  int m_stop = 0;
  std::vector<double> mean_risk;        // fold-averaged, length iterations + 1
  Eigen::MatrixXd fold_risk;            // folds x (iterations + 1)
  std::vector<int> fold_of;             // fold index per curve
};

std::vector<int> assign_folds(Eigen::Index n, int folds, std::uint64_t seed);
CvResult cv_early_stop(const PreparedData& data);

struct FittedEffect {
  CovariateBasis basis;
  Eigen::MatrixXd theta;
  double lambda = 0.0;
  double df = 0.0;
  bool df_clamped = false;
};

struct FittedModel {
  BoostConfig config;
  ResponseSpace space;
  std::vector<FittedEffect> effects;
  std::vector<double> risk_trace;
  std::vector<int> selection_trace;
  int m_stop = 0;
  Eigen::MatrixXd g0;              // product-space Gram of the tangent directions
  Eigen::MatrixXd covariate_gram;  // B^T B / n of the stacked covariate designs
  Eigen::MatrixXd gram_weights;    // full weight matrix in gram mode
  std::string config_hash;

  /// Tangent coefficient vector sum_j Theta_j b_j(x) for every table row.
  Eigen::MatrixXd predictor_coef(const CovariateTable& table) const;
};

FittedModel make_model(const PreparedData& data, const BoostingRun& run);
FittedModel boost_fit(const std::vector<CurveSample>& sample, const CovariateTable& covariates,
                      const BoostConfig& config, std::optional<PoleCoef> pole = std::nullopt);

/// Inner product on a prediction grid according to the model's weight rule.
InnerProduct model_weights(const FittedModel& model, const Eigen::VectorXd& grid);

/// Representative of Exp_p(h(x)) for table row `row`.
Eigen::VectorXcd predict_mean(const FittedModel& model, const CovariateTable& table,
                              Eigen::Index row, const Eigen::VectorXd& grid,
                              const InnerProduct& ip);

/// h_j(x_i) on each curve's grid (all effects summed when effect < 0).
std::vector<Eigen::VectorXcd> effect_evaluations(const FittedModel& model,
                                                 const std::vector<CurveSample>& sample,
                                                 const CovariateTable& table, int effect);

double empirical_risk(const FittedModel& model, const std::vector<CurveSample>& sample,
                      const CovariateTable& table);

/// sum ||fitted_i - truth_i||^2 / sum ||total_i||^2.
double rmse_effect(const std::vector<Eigen::VectorXcd>& fitted,
                   const std::vector<Eigen::VectorXcd>& truth,
                   const std::vector<Eigen::VectorXcd>& total,
                   const std::vector<InnerProduct>& weights);

}  // namespace shapeboost
