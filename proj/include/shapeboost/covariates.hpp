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

// Covariate tables, effect specifications and the covariate-side bases of
// tensor-product effects.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "shapeboost/bspline.hpp"

namespace shapeboost {

/// Column-oriented covariate table keyed by curve id. Every column keeps
/// its raw strings; columns whose entries all parse as numbers are numeric.
class CovariateTable {
 public:
  std::vector<std::string> ids;

  void add_numeric(std::string name, const std::vector<double>& values);
  void add_column(std::string name, std::vector<std::string> raw);

  Eigen::Index rows() const { return static_cast<Eigen::Index>(ids.size()); }
  bool has(std::string_view name) const;
  bool is_numeric(std::string_view name) const;
  /// Throws InputError naming the column when it is missing or not numeric.
  const std::vector<double>& numeric(std::string_view name) const;
  const std::vector<std::string>& raw(std::string_view name) const;
  std::vector<std::string> names() const;

  CovariateTable subset(const std::vector<Eigen::Index>& rows) const;

 private:
  struct Column {
    std::string name;
    std::vector<std::string> raw;
    std::vector<double> num;
    bool numeric = false;
  };
  const Column& column(std::string_view name) const;
  std::vector<Column> cols_;
};

enum class EffectKind { Constant, Linear, Categorical, Smooth, SmoothInteraction };
enum class Centering { None, SumToZero, AroundMarginals };

std::string_view to_string(EffectKind kind);
EffectKind parse_effect_kind(std::string_view name);
std::string_view to_string(Centering c);
Centering parse_centering(std::string_view name);

struct EffectSpec {
  std::string name;
  EffectKind kind = EffectKind::Constant;
  std::vector<std::string> covariates;
  SplineConfig basis{.degree = 3, .n_knots = 4, .cyclic = false, .knot_rule = KnotRule::Equidistant};
  double df = 4.0;
  /// Unset means the kind's default (ridge for factors, second differences
  /// for splines, none otherwise).
  std::optional<PenaltyKind> penalty;
  std::optional<Centering> centering;
  /// Name of an effect whose design this one is centered against.
  std::string nested_in;

  PenaltyKind effective_penalty() const;
  Centering effective_centering() const;
  void validate() const;
};

/// Basis of one covariate inside an effect.
struct MarginalBasis {
  std::string covariate;
  bool factor = false;
  std::vector<std::string> levels;  // sorted, factors only
  double center = 0.0;              // linear effects only
  bool has_spline = false;
  BSplineBasis spline;
};

/// Covariate basis b_j of an effect, including its identifiability
/// reparameterization. Built once on the training sample and then applied
/// unchanged to any covariate table.
struct CovariateBasis {
  EffectSpec spec;
  std::vector<MarginalBasis> marginals;
  Eigen::MatrixXd transform;  // raw columns -> constrained columns
  Eigen::MatrixXd penalty;    // P_j on the constrained columns
  std::shared_ptr<const CovariateBasis> parent;
  Eigen::MatrixXd parent_coef;  // nested centering: design -= parent design * parent_coef

  static CovariateBasis build(const EffectSpec& spec, const CovariateTable& table,
                              std::shared_ptr<const CovariateBasis> parent = nullptr);

  Eigen::Index dim() const { return transform.cols(); }
  Eigen::MatrixXd raw_design(const CovariateTable& table) const;
  Eigen::MatrixXd design(const CovariateTable& table) const;
  /// Penalty on the raw columns before reparameterization.
  Eigen::MatrixXd raw_penalty() const;
};

}  // namespace shapeboost
