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

// Synthetic boosting datasets and a dense reference implementation of the
// component selection.

#pragma once

#include <limits>
#include <string>
#include <vector>

#include "shapeboost/boost.hpp"
#include "shapeboost/effects.hpp"
#include "shapeboost/linalg.hpp"
#include "support/oracles.hpp"

namespace shapeboost::testing {

struct Dataset {
  std::vector<CurveSample> sample;
  CovariateTable table;
};

// Curves whose second harmonic moves with z and whose first harmonic moves
// with the group, seen in random frames on random grids.
inline Dataset make_dataset(Rng& rng, int n, double noise = 0.02) {
  Dataset d;
  std::vector<double> z, z2;
  std::vector<std::string> group;
  const Complex i(0.0, 1.0);
  for (int c = 0; c < n; ++c) {
    const double zc = uniform(rng, -1.0, 1.0);
    const std::string g = c % 2 ? "b" : "a";
    const Eigen::Index k = 12 + static_cast<Eigen::Index>(uniform(rng, 0.0, 10.0));
    CurveSample s;
    s.id = "c" + std::to_string(c);
    s.grid = random_grid(rng, k);
    s.values.resize(k);
    const Complex frame = std::polar(uniform(rng, 0.5, 2.0), uniform(rng, -3.0, 3.0));
    const Complex shift(normal(rng, 3.0), normal(rng, 3.0));
    for (Eigen::Index j = 0; j < k; ++j) {
      const double t = 2.0 * std::numbers::pi * s.grid[j];
      Complex v = std::exp(i * t) + 0.3 * std::exp(-i * t) +
                  0.15 * zc * std::exp(2.0 * i * t) + (g == "b" ? 0.1 : 0.0) * std::exp(-2.0 * i * t);
      v += Complex(normal(rng, noise), normal(rng, noise));
      s.values[j] = shift + frame * v;
    }
    s.weights = InnerProduct::diagonal(trapezoid_weights(s.grid));
    d.sample.push_back(std::move(s));
    d.table.ids.push_back(d.sample.back().id);
    z.push_back(zc);
    z2.push_back(uniform(rng, -1.0, 1.0));
    group.push_back(g);
  }
  d.table.add_numeric("z", z);
  d.table.add_numeric("z2", z2);
  d.table.add_column("g", group);
  return d;
}

inline EffectSpec effect(std::string name, EffectKind kind, std::vector<std::string> cov, double df = 4) {
  EffectSpec e;
  e.name = std::move(name);
  e.kind = kind;
  e.covariates = std::move(cov);
  e.df = df;
  return e;
}

inline BoostConfig small_config(GeometryKind kind) {
  BoostConfig cfg;
  cfg.kind = kind;
  cfg.response = {.degree = 3, .n_knots = 7, .cyclic = true, .knot_rule = KnotRule::Quantile};
  cfg.iterations = 10;
  cfg.folds = 3;
  return cfg;
}

inline std::vector<EffectSpec> five_effects() {
  return {effect("const", EffectKind::Constant, {}, 2), effect("z", EffectKind::Linear, {"z"}, 2),
          effect("g", EffectKind::Categorical, {"g"}, 1),
          effect("sz", EffectKind::Smooth, {"z"}, 3), effect("sz2", EffectKind::Smooth, {"z2"}, 3)};
}

// One boosting trajectory computed from explicit dense least-squares refits.
inline std::vector<int> exhaustive_refit_trace(const PreparedData& data, int iterations) {
  const auto& sample = *data.sample;
  const GeometryKind kind = data.space.kind();
  const Eigen::Index m = data.space.m();
  const std::size_t n = sample.size();
  Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(n));
  std::vector<int> trace;
  for (int it = 0; it < iterations; ++it) {
    std::vector<Eigen::VectorXcd> eps(n);
    for (std::size_t i = 0; i < n; ++i) {
      const CurveCache& c = data.caches[i];
      const Eigen::VectorXcd mu = exp_at_representative(
          c.pole_rep, c.design * coef.col(i).cast<Complex>(), sample[i].weights, kind);
      const Eigen::VectorXcd e = log_at_representative(mu, sample[i].values, sample[i].weights, kind);
      eps[i] = transport_between(mu, c.pole_rep, e, sample[i].weights, kind);
    }
    double best_sse = std::numeric_limits<double>::infinity();
    int best = -1;
    Eigen::VectorXd best_theta;
    for (std::size_t j = 0; j < data.learners.size(); ++j) {
      const Learner& l = data.learners[j];
      const Eigen::Index mj = l.design.cols();
      // Stack sqrt(W) X_i over real and imaginary parts.
      Eigen::Index rows = 0;
      for (const auto& s : sample) rows += 2 * s.size();
      Eigen::MatrixXd x = Eigen::MatrixXd::Zero(rows, m * mj);
      Eigen::VectorXd yv(rows);
      Eigen::Index r0 = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Index k = sample[i].size();
        const Eigen::VectorXd sw = sample[i].weights.weights().cwiseSqrt();
        for (Eigen::Index l2 = 0; l2 < mj; ++l2)
          for (Eigen::Index r = 0; r < m; ++r) {
            const Eigen::VectorXcd col = data.caches[i].design.col(r) * l.design(i, l2);
            x.block(r0, r + m * l2, k, 1) = sw.cwiseProduct(col.real());
            x.block(r0 + k, r + m * l2, k, 1) = sw.cwiseProduct(col.imag());
          }
        yv.segment(r0, k) = sw.cwiseProduct(eps[i].real());
        yv.segment(r0 + k, k) = sw.cwiseProduct(eps[i].imag());
        r0 += 2 * k;
      }
      const Eigen::MatrixXd lhs =
          x.transpose() * x + l.calibration.lambda * l.calibration.penalty;
      const Eigen::VectorXd theta = symmetric_pinv(lhs) * (x.transpose() * yv);
      const double sse = (yv - x * theta).squaredNorm();
      if (sse < best_sse) {
        best_sse = sse;
        best = static_cast<int>(j);
        best_theta = theta;
      }
    }
    trace.push_back(best);
    const Eigen::MatrixXd step = data.config.eta * unvec(best_theta, m);
    for (std::size_t i = 0; i < n; ++i) {
      coef.col(i) += step * data.learners[best].design.row(i).transpose();
    }
  }
  return trace;
}

}  // namespace shapeboost::testing
