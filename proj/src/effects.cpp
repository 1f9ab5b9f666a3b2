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

#include "shapeboost/effects.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <spdlog/spdlog.h>

#include "shapeboost/errors.hpp"
#include "shapeboost/linalg.hpp"

namespace shapeboost {

namespace {

std::vector<Eigen::Index> all_rows(std::span<const Eigen::Index> rows, Eigen::Index n) {
  if (!rows.empty()) return {rows.begin(), rows.end()};
  std::vector<Eigen::Index> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out[i] = i;
  return out;
}

}  // namespace

Eigen::MatrixXd assemble_psi_matrix(const std::vector<Eigen::MatrixXd>& curve_grams,
                                    const Eigen::MatrixXd& covariate_design,
                                    std::span<const Eigen::Index> rows) {
  if (curve_grams.empty()) throw InputError("no curves for the normal equations");
  const Eigen::Index m = curve_grams.front().rows();
  const Eigen::Index mj = covariate_design.cols();
  const std::vector<Eigen::Index> idx = all_rows(rows, covariate_design.rows());
  const auto n = static_cast<Eigen::Index>(idx.size());
  // Block (l, l') = sum_i b_il b_il' G_i, computed as one product of the
  // stacked vec(G_i) with the column products of B.
  Eigen::MatrixXd stacked(m * m, n);
  for (Eigen::Index s = 0; s < n; ++s) {
    stacked.col(s) = Eigen::Map<const Eigen::VectorXd>(curve_grams[idx[s]].data(), m * m);
  }
  const Eigen::Index pairs = mj * (mj + 1) / 2;
  Eigen::MatrixXd prod(n, pairs);
  Eigen::Index col = 0;
  for (Eigen::Index l = 0; l < mj; ++l)
    for (Eigen::Index k = l; k < mj; ++k, ++col)
      for (Eigen::Index s = 0; s < n; ++s)
        prod(s, col) = covariate_design(idx[s], l) * covariate_design(idx[s], k);
  const Eigen::MatrixXd blocks = stacked * prod;
  Eigen::MatrixXd psi(m * mj, m * mj);
  col = 0;
  for (Eigen::Index l = 0; l < mj; ++l) {
    for (Eigen::Index k = l; k < mj; ++k, ++col) {
      const Eigen::Map<const Eigen::MatrixXd> block(blocks.col(col).data(), m, m);
      psi.block(m * l, m * k, m, m) = block;
      if (k != l) psi.block(m * k, m * l, m, m) = block.transpose();
    }
  }
  return psi;
}

Eigen::VectorXd assemble_psi_vector(const Eigen::MatrixXd& curve_cross,
                                    const Eigen::MatrixXd& covariate_design,
                                    std::span<const Eigen::Index> rows) {
  if (rows.empty()) return vec(curve_cross * covariate_design);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(curve_cross.rows(), covariate_design.cols());
  for (Eigen::Index i : rows) acc.noalias() += curve_cross.col(i) * covariate_design.row(i);
  return vec(acc);
}

NormalEquations assemble_normal_eqs(const std::vector<Eigen::MatrixXcd>& tangent_designs,
                                    const std::vector<InnerProduct>& weights,
                                    const Eigen::MatrixXd& covariate_design,
                                    const std::vector<Eigen::VectorXcd>& residuals) {
  const std::size_t n = tangent_designs.size();
  if (weights.size() != n || residuals.size() != n ||
      static_cast<std::size_t>(covariate_design.rows()) != n) {
    throw InputError("normal equations: inconsistent number of curves");
  }
  if (n == 0) throw InputError("no curves for the normal equations");
  const Eigen::Index m = tangent_designs.front().cols();
  std::vector<Eigen::MatrixXd> grams(n);
  Eigen::MatrixXd cross(m, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    grams[i] = weights[i].real_gram(tangent_designs[i]);
    cross.col(static_cast<Eigen::Index>(i)) = weights[i].real_cross(tangent_designs[i], residuals[i]);
  }
  return {assemble_psi_matrix(grams, covariate_design), assemble_psi_vector(cross, covariate_design)};
}

Eigen::MatrixXd kron_penalty(const Eigen::MatrixXd& p_j, const Eigen::MatrixXd& p_perp,
                             double lambda_j, double lambda_perp) {
  const Eigen::Index m = p_perp.rows();
  const Eigen::Index mj = p_j.rows();
  return lambda_j * kron(p_j, Eigen::MatrixXd::Identity(m, m)) +
         lambda_perp * kron(Eigen::MatrixXd::Identity(mj, mj), p_perp);
}

PlsSolver::PlsSolver(const Eigen::MatrixXd& system) : size_(system.rows()) {
  const Eigen::MatrixXd sym = 0.5 * (system + system.transpose());
  ldlt_.compute(sym);
  bool ok = ldlt_.info() == Eigen::Success && ldlt_.isPositive();
  if (ok) {
    const Eigen::VectorXd d = ldlt_.vectorD().cwiseAbs();
    ok = d.size() == 0 || d.minCoeff() > 1e-13 * d.maxCoeff();
  }
  if (!ok) {
    pseudo_ = true;
    pinv_ = symmetric_pinv(sym);
    spdlog::debug("PLS system is singular; using a pseudo-inverse");
  }
}

Eigen::VectorXd PlsSolver::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != size_) throw InputError("PLS right-hand side has the wrong length");
  if (pseudo_) return pinv_ * rhs;
  return ldlt_.solve(rhs);
}

Eigen::MatrixXd PlsSolver::inverse() const {
  if (pseudo_) return pinv_;
  const Eigen::MatrixXd inv = ldlt_.solve(Eigen::MatrixXd::Identity(size_, size_));
  return 0.5 * (inv + inv.transpose());
}

PlsResult pls_solve(const Eigen::MatrixXd& psi, const Eigen::VectorXd& rhs,
                    const Eigen::MatrixXd& penalty, Eigen::Index m) {
  const PlsSolver solver(psi + penalty);
  return {unvec(solver.solve(rhs), m), solver.pseudo_inverse()};
}

namespace {

struct Whitening {
  Eigen::MatrixXd penalty;  // augmented
  Eigen::MatrixXd w;        // penalty = (w w^T)^{-1}
};

Whitening whiten(const Eigen::MatrixXd& p, double rel_ridge) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (p + p.transpose()));
  Eigen::VectorXd s = es.eigenvalues();
  const double top = s.maxCoeff();
  const double floor = top > 0.0 ? rel_ridge * top : 1.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (top <= 0.0) {
      s[i] = 1.0;
    } else if (s[i] < floor) {
      s[i] = floor;
    }
  }
  const Eigen::MatrixXd& v = es.eigenvectors();
  Whitening out;
  out.penalty = v * s.asDiagonal() * v.transpose();
  out.penalty = 0.5 * (out.penalty + out.penalty.transpose());
  out.w = v * s.cwiseSqrt().cwiseInverse().asDiagonal();
  return out;
}

Eigen::VectorXd whitened_spectrum(const Eigen::MatrixXd& psi, const Eigen::MatrixXd& w) {
  const Eigen::MatrixXd a = w.transpose() * psi * w;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (a + a.transpose()),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseMax(0.0);
}

double df_from_spectrum(const Eigen::VectorXd& mu, double lambda) {
  double df = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (mu[i] > 0.0) df += mu[i] / (mu[i] + lambda);
  }
  return df;
}

}  // namespace

Eigen::MatrixXd augmented_penalty(const Eigen::MatrixXd& p_j, const Eigen::MatrixXd& p_perp,
                                  double rel_ridge) {
  return whiten(kron_penalty(p_j, p_perp, 1.0, 1.0), rel_ridge).penalty;
}

double effective_df(const Eigen::MatrixXd& psi, const Eigen::MatrixXd& penalty, double lambda) {
  if (lambda == 0.0) return static_cast<double>(psd_rank(psi));
  Eigen::LLT<Eigen::MatrixXd> llt(penalty);
  if (llt.info() != Eigen::Success) throw NumericalError("penalty is not positive definite");
  // trace((Psi + lambda L L^T)^{-1} Psi) = trace((A + lambda I)^{-1} A), A = L^{-1} Psi L^{-T}.
  const Eigen::MatrixXd li = llt.matrixL().solve(Eigen::MatrixXd::Identity(psi.rows(), psi.rows()));
  return df_from_spectrum(whitened_spectrum(psi, li.transpose()), lambda);
}

DfCalibration df_to_lambda(const Eigen::MatrixXd& psi, const Eigen::MatrixXd& p_j,
                           const Eigen::MatrixXd& p_perp, double df_target) {
  if (!(df_target > 0.0)) throw InputError("df target must be positive");
  const Whitening wh = whiten(kron_penalty(p_j, p_perp, 1.0, 1.0), 1e-8);
  const Eigen::VectorXd mu = whitened_spectrum(psi, wh.w);
  const auto rank = static_cast<double>(psd_rank(psi));
  DfCalibration out;
  out.penalty = wh.penalty;
  // Eigenvalues below the rank cut-off of Psi are numerical noise.
  Eigen::VectorXd mu_eff = mu;
  if (mu.size() > 0) {
    const double cut = 1e-10 * mu.maxCoeff();
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      if (mu_eff[i] <= cut) mu_eff[i] = 0.0;
    }
  }
  const double lo_exp = -20.0, hi_exp = 30.0;
  const double df_hi = df_from_spectrum(mu_eff, std::pow(10.0, lo_exp));
  const double df_lo = df_from_spectrum(mu_eff, std::pow(10.0, hi_exp));
  if (df_target >= std::min(rank, df_hi)) {
    out.lambda = 0.0;
    out.df = rank;
    out.clamped = df_target > rank + 1e-4;
    if (out.clamped) {
      spdlog::warn("df target {} exceeds the attainable {}; using lambda = 0", df_target, rank);
    }
    return out;
  }
  if (df_target <= df_lo) {
    out.lambda = std::pow(10.0, hi_exp);
    out.df = df_lo;
    out.clamped = true;
    spdlog::warn("df target {} is below the attainable {}; clamping", df_target, df_lo);
    return out;
  }
  double a = lo_exp, b = hi_exp;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    const double df = df_from_spectrum(mu_eff, std::pow(10.0, mid));
    if (df > df_target) {
      a = mid;
    } else {
      b = mid;
    }
    if (std::abs(df - df_target) < 1e-9 || b - a < 1e-14) break;
  }
  out.lambda = std::pow(10.0, 0.5 * (a + b));
  out.df = df_from_spectrum(mu_eff, out.lambda);
  return out;
}

}  // namespace shapeboost
