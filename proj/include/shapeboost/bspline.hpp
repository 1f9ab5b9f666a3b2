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

// B-spline bases on an interval, clamped or cyclic, with difference and
// ridge penalties and exact Gram matrices.

#pragma once

#include <span>
#include <string_view>

#include <Eigen/Dense>

namespace shapeboost {

enum class KnotRule { Quantile, Equidistant };
enum class PenaltyKind { None, Ridge, SecondDiff };

std::string_view to_string(KnotRule rule);
KnotRule parse_knot_rule(std::string_view name);
std::string_view to_string(PenaltyKind kind);
PenaltyKind parse_penalty(std::string_view name);

/// n_knots counts interior knots. A clamped basis has n_knots + degree + 1
/// functions; a cyclic one has n_knots + 1 (one per knot interval).
struct SplineConfig {
  int degree = 3;
  int n_knots = 4;
  bool cyclic = false;
  KnotRule knot_rule = KnotRule::Equidistant;

  bool operator==(const SplineConfig&) const = default;
};

class BSplineBasis {
 public:
  BSplineBasis() = default;

  /// Places knots on [lo, hi] by the configured rule; `observed` is only
  /// consulted for quantile knots.
  static BSplineBasis build(const SplineConfig& cfg, std::span<const double> observed,
                            double lo = 0.0, double hi = 1.0);
  /// Rebuilds a basis from stored interior knots.
  static BSplineBasis from_knots(const SplineConfig& cfg, Eigen::VectorXd interior, double lo,
                                 double hi);

  Eigen::Index dim() const { return dim_; }
  const SplineConfig& config() const { return cfg_; }
  const Eigen::VectorXd& interior_knots() const { return interior_; }
  double lower() const { return lo_; }
  double upper() const { return hi_; }

  /// Basis values at x. Clamped bases clamp x into [lo, hi]; cyclic bases
  /// wrap it.
  Eigen::RowVectorXd row(double x) const;
  Eigen::MatrixXd design(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  Eigen::MatrixXd penalty(PenaltyKind kind) const;
  /// Exact L2 Gram matrix over [lo, hi].
  Eigen::MatrixXd gram() const;

 private:
  void init();
  // Index of the knot span containing x in the extended knot vector.
  Eigen::Index span(double x) const;

  SplineConfig cfg_;
  Eigen::VectorXd interior_;
  Eigen::VectorXd knots_;  // full (clamped or periodically extended) knot vector
  double lo_ = 0.0;
  double hi_ = 1.0;
  Eigen::Index dim_ = 0;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// Second-order difference matrix, circulant when cyclic.
Eigen::MatrixXd second_difference(Eigen::Index dim, bool cyclic);

}  // namespace shapeboost
