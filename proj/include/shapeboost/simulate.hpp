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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shapeboost/boost.hpp"

namespace shapeboost {

/// Ground truth [mu] = Exp_p(beta_kappa + f1(z1)) with a tilt-induced smooth
/// effect and a fixed binary contrast.
struct TruthSpec {
  ResponseSpace space;          // true pole, response basis and tangent basis
  Eigen::VectorXd contrast;     // level "k1" gets +contrast/2, "k0" gets -contrast/2
  BSplineBasis z_basis;         // cubic B-splines with 4 knots on [-60, 60]
  Eigen::MatrixXd smooth;       // m x z_basis.dim(); f1(z) = smooth * b(z)
  double projection_error = 0;  // largest relative residual of the tilt family
  Eigen::VectorXd binary_coef(bool level1) const;
  Eigen::VectorXd smooth_coef(double z1) const;
};

/// Design values of z1 within one batch.
std::vector<double> batch_angles();

/// Closed bottle-like outline sampled at `points` unit-speed parameter values
/// t = j / points.
Eigen::VectorXcd builtin_outline(Eigen::Index points);

/// Planar view of a curve tilted by `degrees` about its principal axis,
/// with perspective projection.
Eigen::VectorXcd tilt_view(const Eigen::VectorXcd& curve, double degrees);

/// Builds the truth from the mean of `template_curves`, or from the built-in
/// outline when empty.
TruthSpec gen_truth(GeometryKind kind, const std::vector<CurveSample>& template_curves = {});

/// Tangent coefficients of the raw tilt family at angle z1 (before centering).
Eigen::VectorXd tilt_coef(const TruthSpec& truth, double z1);

enum class NoiseMode { GaussianTangent, ResamplePool };

struct SimConfig {
  Eigen::Index n = 54;
  double mean_grid = 40.0;
  Eigen::Index reference_grid = 150;
  NoiseMode noise = NoiseMode::GaussianTangent;
  double length_scale = 2.0;  // correlation length in response-basis coefficients
  double amplitude = 1.0;     // noise multiplier when calibrate is off
  /// Rescale the noise to hit noise_to_signal.
  bool calibrate = true;
  /// Residual-to-predictor variance; unset means 1.05 for forms, 0.65 for shapes.
  std::optional<double> noise_to_signal;
  bool pre_aligned = false;
  WeightRule weights = WeightRule::Trapezoid;
  std::uint64_t seed = 1;
  /// Tangent evaluations at the true pole for NoiseMode::ResamplePool.
  std::vector<CurveSample> pool;

  void validate() const;
};

struct SimDataset {
  std::vector<CurveSample> sample;
  CovariateTable table;  // kappa (k0/k1), z1, z2
  std::vector<std::string> effect_names;                // "binary", "smooth"
  std::vector<std::vector<Eigen::VectorXcd>> truth;     // per effect, per curve
  std::vector<Eigen::VectorXcd> total;                  // h(x_i) at the true pole
  std::vector<Eigen::VectorXcd> true_mean;              // mu_i before the random frame
  double noise_to_signal = 0.0;                         // realized
};

SimDataset gen_dataset(const TruthSpec& truth, const SimConfig& cfg);

/// Effects of the simulation model: binary and smooth, plus the constant,
/// linear z1 and smooth z2 nuisance effects.
std::vector<EffectSpec> simulation_effects(bool nuisance, double df = 4.0);

/// Fitted effect evaluations moved to the true pole: each curve's estimated
/// pole representative is aligned to the true one and the tangent vector is
/// transported along.
std::vector<Eigen::VectorXcd> effect_at_true_pole(const FittedModel& model,
                                                  const TruthSpec& truth,
                                                  const std::vector<CurveSample>& sample,
                                                  const CovariateTable& table, int effect);

/// rMSE of every fitted effect against the truth (zero truth for nuisance).
std::vector<double> simulation_rmse(const FittedModel& model, const TruthSpec& truth,
                                    const SimDataset& data);

/// Independent stream seed for replicate `index`.
std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace shapeboost
