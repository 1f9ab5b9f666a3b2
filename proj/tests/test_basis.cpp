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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include <Eigen/Eigenvalues>

#include "shapeboost/basis.hpp"
#include "shapeboost/errors.hpp"
#include "support/oracles.hpp"

using namespace shapeboost;
using namespace shapeboost::testing;

namespace {

Eigen::Index rank_of(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s[r] > 1e-10 * s[0]) ++r;
  return r;
}

std::vector<CurveSample> random_sample(Rng& rng, int n, const BSplineBasis& basis,
                                       PoleCoef& pole) {
  std::vector<CurveSample> out;
  for (int i = 0; i < n; ++i) {
    CurveSample s;
    s.id = "c" + std::to_string(i);
    s.grid = random_grid(rng, 10 + i);
    s.weights = InnerProduct::diagonal(trapezoid_weights(s.grid));
    s.values = random_curve(rng, s.grid);
    out.push_back(s);
  }
  const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(200, 0.0, 1.0);
  pole.coef = pooled_spline_fit({basis.design(t)}, {random_curve(rng, t)},
                                {InnerProduct::diagonal(trapezoid_weights(t))},
                                basis.penalty(PenaltyKind::SecondDiff), 1e-6);
  return out;
}

}  // namespace

TEST_CASE("linear basis is a hat function at the knots") {
  SplineConfig cfg{.degree = 1, .n_knots = 3, .cyclic = false, .knot_rule = KnotRule::Equidistant};
  const BSplineBasis b = BSplineBasis::build(cfg, {});
  REQUIRE(b.dim() == 5);
  const Eigen::RowVectorXd r = b.row(0.5);
  CHECK(r[2] == doctest::Approx(1.0));
  CHECK(r[1] == doctest::Approx(0.0));
  CHECK(r[3] == doctest::Approx(0.0));
  // Landmark identity: knots at every landmark give the identity design.
  SplineConfig lm{.degree = 1, .n_knots = 4, .cyclic = false, .knot_rule = KnotRule::Equidistant};
  const Eigen::MatrixXd d = BSplineBasis::build(lm, {}).design(landmark_grid(6));
  CHECK((d - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("partition of unity and periodicity") {
  Rng rng(7);
  std::vector<double> obs(300);
  for (double& x : obs) x = uniform(rng);
  for (int degree = 1; degree <= 4; ++degree) {
    for (bool cyclic : {false, true}) {
      for (KnotRule rule : {KnotRule::Equidistant, KnotRule::Quantile}) {
        SplineConfig cfg{.degree = degree, .n_knots = 9, .cyclic = cyclic, .knot_rule = rule};
        const BSplineBasis b = BSplineBasis::build(cfg, obs);
        CHECK(b.dim() == (cyclic ? 10 : 9 + degree + 1));
        const Eigen::VectorXd t = random_grid(rng, 50);
        const Eigen::MatrixXd d = b.design(t);
        CHECK((d.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);
        CHECK(d.minCoeff() >= 0.0);
        if (cyclic) {
          CHECK((b.row(0.0) - b.row(1.0)).cwiseAbs().maxCoeff() < 1e-12);
          for (Eigen::Index j = 0; j < t.size(); ++j)
            CHECK((b.row(t[j]) - b.row(t[j] + 1.0)).cwiseAbs().maxCoeff() < 1e-12);
          // Continuity across the seam.
          CHECK((b.row(1.0 - 1e-12) - b.row(0.0)).cwiseAbs().maxCoeff() < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("quantile knots need enough distinct observations") {
  SplineConfig cfg{.degree = 3, .n_knots = 5, .cyclic = false, .knot_rule = KnotRule::Quantile};
  const std::vector<double> obs{0.1, 0.2, 0.2, 0.3, 0.4};
  CHECK_THROWS_AS(BSplineBasis::build(cfg, obs), InputError);
}

TEST_CASE("exact gram matches quadrature for clamped and cyclic bases") {
  for (bool cyclic : {false, true}) {
    SplineConfig cfg{.degree = 3, .n_knots = 5, .cyclic = cyclic, .knot_rule = KnotRule::Equidistant};
    const BSplineBasis b = BSplineBasis::build(cfg, {});
    const Eigen::MatrixXd g = b.gram();
    for (Eigen::Index a = 0; a < b.dim(); ++a)
      for (Eigen::Index c = a; c < b.dim(); ++c)
        CHECK(g(a, c) == doctest::Approx(quadrature_gram_entry(b, a, c, 6000)).epsilon(1e-9));
    CHECK(g.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("second difference penalties") {
  SplineConfig cfg{.degree = 3, .n_knots = 6, .cyclic = true, .knot_rule = KnotRule::Equidistant};
  const BSplineBasis b = BSplineBasis::build(cfg, {});
  const Eigen::MatrixXd p = b.penalty(PenaltyKind::SecondDiff);
  CHECK((p * Eigen::VectorXd::Ones(b.dim())).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(rank_of(p) == b.dim() - 1);
  SplineConfig open = cfg;
  open.cyclic = false;
  const BSplineBasis bo = BSplineBasis::build(open, {});
  CHECK(rank_of(bo.penalty(PenaltyKind::SecondDiff)) == bo.dim() - 2);
  CHECK(bo.penalty(PenaltyKind::Ridge).isIdentity());
}

TEST_CASE("constraint matrix for a single landmark configuration") {
  const Eigen::Index k = 5;
  SplineConfig lm{.degree = 1, .n_knots = 3, .cyclic = false, .knot_rule = KnotRule::Equidistant};
  const BSplineBasis b = BSplineBasis::build(lm, {});
  CurveSample s;
  s.id = "x";
  s.grid = landmark_grid(k);
  s.weights = InnerProduct::diagonal(uniform_weights(k));
  s.values.resize(k);
  s.values << Complex(0, 0), Complex(2, 0), Complex(3, 1), Complex(1, 3), Complex(-1, 1);
  PoleCoef pole{s.values};
  const Eigen::MatrixXd c = constraint_matrix({s}, b, pole, GeometryKind::Shape);
  // Hand sums: <b_l, zeta> = zeta_l / k for identity design and uniform weights.
  const Eigen::VectorXcd pc = center(s.values, s.weights);
  const Eigen::VectorXcd pn = pc / s.weights.norm(pc);
  for (Eigen::Index l = 0; l < k; ++l) {
    CHECK(c(0, l) == doctest::Approx(0.2));
    CHECK(c(0, k + l) == doctest::Approx(0.0));
    CHECK(c(1, l) == doctest::Approx(0.0));
    CHECK(c(1, k + l) == doctest::Approx(0.2));
    CHECK(c(2, l) == doctest::Approx(-pn[l].imag() / k));
    CHECK(c(2, k + l) == doctest::Approx(pn[l].real() / k));
    CHECK(c(3, l) == doctest::Approx(pn[l].real() / k));
    CHECK(c(3, k + l) == doctest::Approx(pn[l].imag() / k));
  }
  CHECK(rank_of(c) == 4);
  CHECK(rank_of(constraint_matrix({s}, b, pole, GeometryKind::Form)) == 3);
}

TEST_CASE("null-space transform") {
  const TangentTransform id = nullspace_transform(Eigen::MatrixXd::Zero(3, 6));
  CHECK(id.z.isIdentity());
  Eigen::MatrixXd e1 = Eigen::MatrixXd::Zero(1, 6);
  e1(0, 0) = 1.0;
  const TangentTransform t1 = nullspace_transform(e1);
  CHECK(t1.m() == 5);
  CHECK(t1.z.row(0).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((t1.z.transpose() * t1.z - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);

  Rng rng(13);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::MatrixXd c(4, 20);
    for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = normal(rng);
    const TangentTransform t = nullspace_transform(c);
    CHECK(t.m() == 16);
    CHECK((c * t.z).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((t.z.transpose() * t.z - Eigen::MatrixXd::Identity(16, 16)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  // Rank-deficient rows reduce the constraint count.
  Eigen::MatrixXd dup(2, 6);
  dup.row(0) = e1.row(0);
  dup.row(1) = 2.0 * e1.row(0);
  CHECK(nullspace_transform(dup).m() == 5);
}

TEST_CASE("tangent designs satisfy the product-space constraints") {
  Rng rng(19);
  SplineConfig cfg{.degree = 3, .n_knots = 11, .cyclic = true, .knot_rule = KnotRule::Equidistant};
  const BSplineBasis b = BSplineBasis::build(cfg, {});
  for (GeometryKind kind : {GeometryKind::Form, GeometryKind::Shape}) {
    PoleCoef pole;
    const std::vector<CurveSample> sample = random_sample(rng, 8, b, pole);
    const Eigen::MatrixXd c = constraint_matrix(sample, b, pole, kind);
    const TangentTransform t = nullspace_transform(c);
    CHECK(t.m() == 2 * b.dim() - (kind == GeometryKind::Form ? 3 : 4));

    // Averaged normal residuals vanish for every direction.
    const Eigen::Index m = t.m();
    Eigen::MatrixXd resid = Eigen::MatrixXd::Zero(kind == GeometryKind::Form ? 3 : 4, m);
    for (const CurveSample& s : sample) {
      const Eigen::MatrixXcd d = tangent_design(b, s.grid, t);
      const Eigen::VectorXcd p = pole_representative(pole.evaluate(b, s.grid), s.weights, kind);
      const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(s.size());
      const Complex i(0.0, 1.0);
      for (Eigen::Index r = 0; r < m; ++r) {
        resid(0, r) += s.weights(one, d.col(r)).real();
        resid(1, r) += s.weights(Eigen::VectorXcd(i * one), d.col(r)).real();
        resid(2, r) += s.weights(Eigen::VectorXcd(i * p), d.col(r)).real();
        if (kind == GeometryKind::Shape) resid(3, r) += s.weights(p, d.col(r)).real();
      }
    }
    CHECK(resid.cwiseAbs().maxCoeff() / sample.size() <= 1e-8);

    const Eigen::MatrixXd pp = transformed_penalty(b.penalty(PenaltyKind::SecondDiff), t);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pp);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  }

  // Unconstrained: columns are b_l and i b_l; linear in Z.
  const TangentTransform id{Eigen::MatrixXd::Identity(2 * b.dim(), 2 * b.dim())};
  const Eigen::VectorXd grid = random_grid(rng, 17);
  const Eigen::MatrixXcd d = tangent_design(b, grid, id);
  const Eigen::MatrixXd bd = b.design(grid);
  CHECK((d.leftCols(b.dim()).real() - bd).cwiseAbs().maxCoeff() == 0.0);
  CHECK((d.rightCols(b.dim()).imag() - bd).cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.leftCols(b.dim()).imag().cwiseAbs().maxCoeff() == 0.0);
  const TangentTransform scaled{2.5 * id.z};
  CHECK((tangent_design(b, grid, scaled) - 2.5 * d).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(tangent_design(b, Eigen::Vector3d(0.0, 0.5, 1.5), id), InputError);
}
