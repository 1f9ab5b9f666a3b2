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

// Quotient geometry of planar curves under translation and rotation (form)
// or translation, rotation and scaling (shape). Curves are handled through
// their evaluations on a finite grid, with one inner product per curve.
//
// Convention: <a, b> = a^H W b, conjugate-linear in the first argument.

#pragma once

#include <complex>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace shapeboost {

using Complex = std::complex<double>;

enum class GeometryKind { Form, Shape };

std::string_view to_string(GeometryKind kind);
GeometryKind parse_geometry(std::string_view name);

/// Weighted inner product on C^k, either diagonal or a full SPD matrix.
///
/// Full matrices are validated by a Cholesky factorization that is kept for
/// later use (square-root weighting in factorizations).
class InnerProduct {
 public:
  InnerProduct() = default;

  static InnerProduct diagonal(Eigen::VectorXd weights);
  static InnerProduct full(Eigen::MatrixXd weights);

  Eigen::Index size() const { return is_diagonal_ ? diag_.size() : full_.rows(); }
  bool is_diagonal() const { return is_diagonal_; }

  Complex operator()(const Eigen::Ref<const Eigen::VectorXcd>& a,
                     const Eigen::Ref<const Eigen::VectorXcd>& b) const;
  double squared_norm(const Eigen::Ref<const Eigen::VectorXcd>& a) const;
  double norm(const Eigen::Ref<const Eigen::VectorXcd>& a) const;

  /// W * v.
  Eigen::VectorXcd apply(const Eigen::Ref<const Eigen::VectorXcd>& v) const;
  /// Re(D^H W D) for a complex design with k rows.
  Eigen::MatrixXd real_gram(const Eigen::Ref<const Eigen::MatrixXcd>& design) const;
  /// Re(D^H W e).
  Eigen::VectorXd real_cross(const Eigen::Ref<const Eigen::MatrixXcd>& design,
                             const Eigen::Ref<const Eigen::VectorXcd>& e) const;
  /// Upper-triangular R with W = R^T R.
  Eigen::MatrixXd sqrt_factor() const;

  /// Norm of the constant function 1 on this grid.
  double unit_norm() const { return one_norm_; }

  const Eigen::VectorXd& weights() const { return diag_; }
  const Eigen::MatrixXd& matrix() const { return full_; }

 private:
  bool is_diagonal_ = true;
  Eigen::VectorXd diag_;
  Eigen::MatrixXd full_;
  Eigen::MatrixXd upper_;
  double one_norm_ = 0.0;
};

/// Trapezoid rule on [0, 1] for a strictly increasing grid.
Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& grid);
Eigen::VectorXd uniform_weights(Eigen::Index k);
/// Landmark index j = 1..k mapped to (j - 1) / (k - 1).
Eigen::VectorXd landmark_grid(Eigen::Index k);

/// One observed planar curve or landmark configuration.
struct CurveSample {
  std::string id;
  Eigen::VectorXd grid;
  Eigen::VectorXcd values;
  InnerProduct weights;

  Eigen::Index size() const { return values.size(); }
  /// Throws InputError (or DegenerateAlignment for constant curves).
  void validate() const;
};

/// y - <1, y>/<1, 1> 1.
Eigen::VectorXcd center(const Eigen::Ref<const Eigen::VectorXcd>& y, const InnerProduct& ip);

/// Centered (form) or centered and unit-norm (shape) version of a pole.
Eigen::VectorXcd pole_representative(const Eigen::Ref<const Eigen::VectorXcd>& p,
                                     const InnerProduct& ip, GeometryKind kind);

struct Alignment {
  Eigen::VectorXcd values;  ///< representative aligned to the pole
  Complex rotation;         ///< u applied to the centered curve
  double scale = 1.0;       ///< 1 for forms, 1/||u y|| for shapes
};

/// Representative of [y] rotation aligned to the representative of p.
Alignment representative(const Eigen::Ref<const Eigen::VectorXcd>& y,
                         const Eigen::Ref<const Eigen::VectorXcd>& p, const InnerProduct& ip,
                         GeometryKind kind);

/// Same as representative(), but p must already be a pole representative.
Alignment align_to_representative(const Eigen::Ref<const Eigen::VectorXcd>& y,
                                  const Eigen::Ref<const Eigen::VectorXcd>& p_rep,
                                  const InnerProduct& ip, GeometryKind kind);

double geodesic_dist(const Eigen::Ref<const Eigen::VectorXcd>& y,
                     const Eigen::Ref<const Eigen::VectorXcd>& p, const InnerProduct& ip,
                     GeometryKind kind);

/// A tangent vector together with the representative it is attached to.
struct TangentEvals {
  Eigen::VectorXcd values;
  Eigen::VectorXcd pole;
  GeometryKind kind = GeometryKind::Form;
};

/// Relative violations of the tangent-space constraints at a representative.
struct TangentDefect {
  double translation = 0.0;  ///< max(|Re|, |Im|) of <1, v> / ||v||, unit constant
  double rotation = 0.0;     ///< |Im <v, p>| / (||v|| ||p||)
  double scale = 0.0;        ///< |Re <v, p>| / (||v|| ||p||), shapes only
  double max() const;
};

inline constexpr double kTangentTolerance = 1e-8;

TangentDefect tangent_defect(const Eigen::Ref<const Eigen::VectorXcd>& p_rep,
                             const Eigen::Ref<const Eigen::VectorXcd>& v, const InnerProduct& ip,
                             GeometryKind kind);

/// Orthogonal projection (real inner product) onto the tangent space at p_rep.
Eigen::VectorXcd project_tangent(const Eigen::Ref<const Eigen::VectorXcd>& p_rep,
                                 const Eigen::Ref<const Eigen::VectorXcd>& v,
                                 const InnerProduct& ip, GeometryKind kind);

/// Representative of Exp_[p](beta); beta must be tangent at the representative of p.
Eigen::VectorXcd exp_map(const Eigen::Ref<const Eigen::VectorXcd>& p,
                         const Eigen::Ref<const Eigen::VectorXcd>& beta, const InnerProduct& ip,
                         GeometryKind kind);
Eigen::VectorXcd exp_at_representative(const Eigen::Ref<const Eigen::VectorXcd>& p_rep,
                                       const Eigen::Ref<const Eigen::VectorXcd>& beta,
                                       const InnerProduct& ip, GeometryKind kind);

/// Log_[p]([y]) attached to the representative of p.
TangentEvals log_map(const Eigen::Ref<const Eigen::VectorXcd>& p,
                     const Eigen::Ref<const Eigen::VectorXcd>& y, const InnerProduct& ip,
                     GeometryKind kind);
/// Log at an existing representative; `y` may be any raw curve.
Eigen::VectorXcd log_at_representative(const Eigen::Ref<const Eigen::VectorXcd>& p_rep,
                                       const Eigen::Ref<const Eigen::VectorXcd>& y,
                                       const InnerProduct& ip, GeometryKind kind);

/// Parallel transport of eps (attached to eps.pole) to the mutually aligned
/// representative `to`.
TangentEvals parallel_transport(const TangentEvals& eps,
                                const Eigen::Ref<const Eigen::VectorXcd>& to,
                                const InnerProduct& ip);
Eigen::VectorXcd transport_between(const Eigen::Ref<const Eigen::VectorXcd>& from,
                                   const Eigen::Ref<const Eigen::VectorXcd>& to,
                                   const Eigen::Ref<const Eigen::VectorXcd>& eps,
                                   const InnerProduct& ip, GeometryKind kind);

}  // namespace shapeboost
