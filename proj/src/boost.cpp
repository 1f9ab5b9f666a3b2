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

#include "shapeboost/boost.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <set>

#include <spdlog/spdlog.h>

#include "shapeboost/errors.hpp"
#include "shapeboost/linalg.hpp"
#include "shapeboost/parallel.hpp"

namespace shapeboost {

namespace {

// Re-throws geometry failures with the offending curve id attached.
template <class Fn>
auto for_curve(const std::string& id, Fn&& fn) {
  try {
    return fn();
  } catch (const DegenerateAlignment& e) {
    if (!e.curve_id().empty()) throw;
    throw DegenerateAlignment(e.what(), id);
  } catch (const AntipodalTransport& e) {
    if (!e.curve_id().empty()) throw;
    throw AntipodalTransport(e.what(), id);
  } catch (const OutOfDomain& e) {
    if (!e.curve_id().empty()) throw;
    throw OutOfDomain(e.what(), id);
  } catch (const NotTangent& e) {
    if (!e.curve_id().empty()) throw;
    throw NotTangent(e.what(), id);
  }
}

std::vector<Eigen::Index> iota_rows(Eigen::Index n) {
  std::vector<Eigen::Index> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out[i] = i;
  return out;
}

// Subtracts the product-space mean so the pole is centered on average.
void center_pole(PoleCoef& pole, const std::vector<Eigen::MatrixXd>& designs,
                 const std::vector<CurveSample>& sample) {
  Complex num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const InnerProduct& ip = sample[i].weights;
    const Eigen::VectorXcd p = designs[i].cast<Complex>() * pole.coef;
    num += ip(Eigen::VectorXcd::Ones(p.size()), p);
    den += ip.unit_norm() * ip.unit_norm();
  }
  // B-splines sum to one, so a constant shift of all coefficients shifts
  // the curve by the same constant.
  pole.coef.array() -= num / den;
}

double product_norm(const PoleCoef& pole, const std::vector<Eigen::MatrixXd>& designs,
                    const std::vector<CurveSample>& sample) {
  double s = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const Eigen::VectorXcd p = designs[i].cast<Complex>() * pole.coef;
    s += sample[i].weights.squared_norm(center(p, sample[i].weights));
  }
  return std::sqrt(s / static_cast<double>(sample.size()));
}

std::vector<CurveCache> build_caches(const ResponseSpace& space,
                                     const std::vector<CurveSample>& sample, int threads) {
  std::vector<CurveCache> caches(sample.size());
  parallel_for(sample.size(), threads, [&](std::size_t i) {
    caches[i] = for_curve(sample[i].id,
                          [&] { return space.cache(sample[i].grid, sample[i].weights); });
  });
  return caches;
}

}  // namespace

std::string_view to_string(WeightRule rule) {
  switch (rule) {
    case WeightRule::Trapezoid:
      return "trapezoid";
    case WeightRule::Uniform:
      return "uniform";
    case WeightRule::Column:
      return "column";
    case WeightRule::Gram:
      return "gram";
  }
  return "trapezoid";
}

WeightRule parse_weight_rule(std::string_view name) {
  for (WeightRule r : {WeightRule::Trapezoid, WeightRule::Uniform, WeightRule::Column,
                       WeightRule::Gram}) {
    if (to_string(r) == name) return r;
  }
  throw InputError("unknown weight rule '" + std::string(name) + "'");
}

void BoostConfig::validate() const {
  if (!(eta > 0.0 && eta <= 1.0)) throw InputError("eta must lie in (0, 1]");
  if (iterations < 0) throw InputError("iterations must be nonnegative");
  if (folds < 2) throw InputError("folds must be at least 2");
  if (weights == WeightRule::Gram && !gram_basis) {
    throw InputError("gram weights need a gram_basis");
  }
  std::set<std::string> names;
  for (const EffectSpec& e : effects) {
    e.validate();
    if (!e.nested_in.empty() && !names.count(e.nested_in)) {
      throw InputError("effect '" + e.name + "' is nested in unknown or later effect '" +
                       e.nested_in + "'");
    }
    if (!names.insert(e.name).second) throw InputError("duplicate effect name '" + e.name + "'");
  }
}

ResponseSpace::ResponseSpace(GeometryKind kind, BSplineBasis basis, PenaltyKind penalty,
                             PoleCoef pole, const std::vector<CurveSample>& sample)
    : kind_(kind), basis_(std::move(basis)), penalty_(penalty), pole_(std::move(pole)) {
  transform_ = nullspace_transform(constraint_matrix(sample, basis_, pole_, kind_));
  finish();
}

ResponseSpace::ResponseSpace(GeometryKind kind, BSplineBasis basis, PenaltyKind penalty,
                             PoleCoef pole, TangentTransform transform)
    : kind_(kind),
      basis_(std::move(basis)),
      penalty_(penalty),
      pole_(std::move(pole)),
      transform_(std::move(transform)) {
  if (transform_.z.rows() != 2 * basis_.dim()) {
    throw InputError("tangent transform does not match the response basis");
  }
  finish();
}

void ResponseSpace::finish() {
  p_perp_ = transformed_penalty(basis_.penalty(penalty_), transform_);
}

CurveCache ResponseSpace::cache(const Eigen::VectorXd& grid, const InnerProduct& ip) const {
  CurveCache c;
  c.basis_rows = basis_.design(grid);
  c.pole_rep = pole_representative(c.basis_rows.cast<Complex>() * pole_.coef, ip, kind_);
  c.raw_design = tangent_design(c.basis_rows, transform_);
  c.design.resize(c.raw_design.rows(), c.raw_design.cols());
  for (Eigen::Index r = 0; r < c.raw_design.cols(); ++r) {
    c.design.col(r) = project_tangent(c.pole_rep, c.raw_design.col(r), ip, kind_);
  }
  c.stacked.resize(2 * c.design.rows(), c.design.cols());
  c.stacked.topRows(c.design.rows()) = c.design.real();
  c.stacked.bottomRows(c.design.rows()) = c.design.imag();
  c.gram = ip.real_gram(c.design);
  return c;
}

namespace {

Eigen::VectorXcd tangent_eval(const CurveCache& cache, const Eigen::VectorXd& c) {
  const Eigen::Index k = cache.design.rows();
  const Eigen::VectorXd s = cache.stacked * c;
  Eigen::VectorXcd h(k);
  h.real() = s.head(k);
  h.imag() = s.tail(k);
  return h;
}

}  // namespace

Eigen::VectorXd tangent_cross(const CurveCache& cache, const InnerProduct& ip,
                              const Eigen::VectorXcd& e) {
  const Eigen::Index k = e.size();
  Eigen::VectorXd we(2 * k);
  if (ip.is_diagonal()) {
    we.head(k) = ip.weights().cwiseProduct(e.real());
    we.tail(k) = ip.weights().cwiseProduct(e.imag());
  } else {
    we.head(k) = ip.matrix() * e.real();
    we.tail(k) = ip.matrix() * e.imag();
  }
  return cache.stacked.transpose() * we;
}

CurveState evaluate_curve(const CurveSample& y, const CurveCache& cache, const Eigen::VectorXd& c,
                          GeometryKind kind) {
  return for_curve(y.id, [&] {
    const InnerProduct& ip = y.weights;
    CurveState s;
    const Eigen::VectorXcd h = tangent_eval(cache, c);
    s.mean = exp_at_representative(cache.pole_rep, h, ip, kind);
    const Eigen::VectorXcd eps = log_at_representative(s.mean, y.values, ip, kind);
    s.sq_dist = ip.squared_norm(eps);
    s.residual = transport_between(s.mean, cache.pole_rep, eps, ip, kind);
    return s;
  });
}

double curve_sq_dist(const CurveSample& y, const CurveCache& cache, const Eigen::VectorXd& c,
                     GeometryKind kind) {
  return for_curve(y.id, [&] {
    const Eigen::VectorXcd h = tangent_eval(cache, c);
    const Eigen::VectorXcd mean = exp_at_representative(cache.pole_rep, h, y.weights, kind);
    return y.weights.squared_norm(log_at_representative(mean, y.values, y.weights, kind));
  });
}

PoleCoef preliminary_pole(const std::vector<CurveSample>& sample, GeometryKind kind,
                          const BSplineBasis& basis, PenaltyKind penalty,
                          const PoleOptions& options) {
  if (sample.empty()) throw InputError("pole estimation needs at least one curve");
  const Eigen::MatrixXd p0 = basis.penalty(penalty);
  std::vector<Eigen::MatrixXd> designs;
  std::vector<InnerProduct> weights;
  for (const CurveSample& s : sample) {
    designs.push_back(basis.design(s.grid));
    weights.push_back(s.weights);
  }
  // Reference: the first curve with the most evaluations.
  std::size_t start = 0;
  for (std::size_t i = 1; i < sample.size(); ++i) {
    if (sample[i].size() > sample[start].size()) start = i;
  }
  PoleCoef ref;
  ref.coef = pooled_spline_fit({designs[start]}, {center(sample[start].values, weights[start])},
                               {weights[start]}, p0, options.smoothing);
  for (int round = 0; round < std::max(1, options.align_rounds); ++round) {
    std::vector<Eigen::MatrixXd> used_designs;
    std::vector<Eigen::VectorXcd> aligned;
    std::vector<InnerProduct> used_weights;
    for (std::size_t i = 0; i < sample.size(); ++i) {
      try {
        const Eigen::VectorXcd r = pole_representative(
            designs[i].cast<Complex>() * ref.coef, weights[i], kind);
        aligned.push_back(align_to_representative(sample[i].values, r, weights[i], kind).values);
        used_designs.push_back(designs[i]);
        used_weights.push_back(weights[i]);
      } catch (const DegenerateAlignment&) {
        spdlog::warn("curve '{}' cannot be aligned to the preliminary mean; skipped",
                     sample[i].id);
      }
    }
    if (aligned.empty()) throw DegenerateAlignment("no curve could be aligned for the pole");
    ref.coef = pooled_spline_fit(used_designs, aligned, used_weights, p0, options.smoothing);
  }
  center_pole(ref, designs, sample);
  if (kind == GeometryKind::Shape) ref.coef /= product_norm(ref, designs, sample);
  return ref;
}

namespace {

struct InterceptFit {
  Eigen::VectorXd coef;
  double mean_residual = 0.0;
  Eigen::MatrixXd gram_mean;  // sum_i G_i / n
};

// Intercept-only boosting with a constant learner, lambda = 0 and a full step.
InterceptFit intercept_boost(const std::vector<CurveSample>& sample,
                             const std::vector<CurveCache>& caches, GeometryKind kind,
                             const PoleOptions& options, int threads) {
  const std::size_t n = sample.size();
  const Eigen::Index m = caches.front().design.cols();
  InterceptFit out;
  out.gram_mean = Eigen::MatrixXd::Zero(m, m);
  for (const CurveCache& c : caches) out.gram_mean += c.gram;
  out.gram_mean /= static_cast<double>(n);
  const PlsSolver solver(out.gram_mean);
  out.coef = Eigen::VectorXd::Zero(m);
  double prev = std::numeric_limits<double>::infinity();
  std::vector<double> norms(n);
  Eigen::MatrixXd cross(m, static_cast<Eigen::Index>(n));
  for (int it = 0; it <= options.max_iterations; ++it) {
    parallel_for(n, threads, [&](std::size_t i) {
      const CurveState s = evaluate_curve(sample[i], caches[i], out.coef, kind);
      norms[i] = std::sqrt(s.sq_dist);
      cross.col(static_cast<Eigen::Index>(i)) =
          tangent_cross(caches[i], sample[i].weights, s.residual);
    });
    double mean = 0.0;
    for (double v : norms) mean += v;
    mean /= static_cast<double>(n);
    out.mean_residual = mean;
    if (it == options.max_iterations || mean == 0.0) break;
    const Eigen::VectorXd step = solver.solve(cross.rowwise().sum() / static_cast<double>(n));
    const double step_norm = std::sqrt(std::max(0.0, step.dot(out.gram_mean * step)));
    if (step_norm <= options.stationarity * mean) break;
    // Stagnation guard once the step is already small.
    if (std::abs(prev - mean) <= options.relative_change * prev && step_norm <= 1e-7 * mean) break;
    out.coef += step;
    prev = mean;
  }
  return out;
}

}  // namespace

PoleCoef estimate_pole(const std::vector<CurveSample>& sample, GeometryKind kind,
                       const BSplineBasis& basis, PenaltyKind penalty,
                       const PoleOptions& options, int threads) {
  PoleCoef pole = preliminary_pole(sample, kind, basis, penalty, options);
  std::vector<Eigen::MatrixXd> designs;
  for (const CurveSample& s : sample) designs.push_back(basis.design(s.grid));
  for (int round = 0; round < options.max_rounds; ++round) {
    const ResponseSpace space(kind, basis, penalty, pole, sample);
    const std::vector<CurveCache> caches = build_caches(space, sample, threads);
    const InterceptFit fit = intercept_boost(sample, caches, kind, options, threads);
    const double size = std::sqrt(std::max(0.0, fit.coef.dot(fit.gram_mean * fit.coef)));
    spdlog::debug("pole round {}: |h0| = {:.3e}, mean residual = {:.6e}", round, size,
                  fit.mean_residual);
    if (size <= 1e-9 * fit.mean_residual || size == 0.0) break;
    // Re-express Exp_p(h0) in basis coefficients.
    const Eigen::VectorXcd h = space.transform().complex_coef() * fit.coef.cast<Complex>();
    if (kind == GeometryKind::Form) {
      pole.coef += h;
    } else {
      if (size >= std::numbers::pi - 1e-6) throw OutOfDomain("pole update beyond the cut locus");
      const double nrm = product_norm(pole, designs, sample);
      pole.coef = std::cos(size) * pole.coef / nrm + (std::sin(size) / size) * h;
    }
    center_pole(pole, designs, sample);
    if (kind == GeometryKind::Shape) pole.coef /= product_norm(pole, designs, sample);
  }
  return pole;
}

double frechet_stationarity(const std::vector<CurveSample>& sample, const ResponseSpace& space) {
  const std::vector<CurveCache> caches = build_caches(space, sample, 1);
  const std::size_t n = sample.size();
  const Eigen::Index m = space.m();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd cross = Eigen::VectorXd::Zero(m);
  double mean = 0.0;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(m);
  for (std::size_t i = 0; i < n; ++i) {
    const CurveState s = evaluate_curve(sample[i], caches[i], zero, space.kind());
    gram += caches[i].gram;
    cross += tangent_cross(caches[i], sample[i].weights, s.residual);
    mean += std::sqrt(s.sq_dist);
  }
  gram /= static_cast<double>(n);
  cross /= static_cast<double>(n);
  mean /= static_cast<double>(n);
  if (mean == 0.0) return 0.0;
  const Eigen::VectorXd c = PlsSolver(gram).solve(cross);
  return std::sqrt(std::max(0.0, c.dot(gram * c))) / mean;
}

PreparedData prepare(const std::vector<CurveSample>& sample, const CovariateTable& covariates,
                     const BoostConfig& config, std::optional<PoleCoef> pole) {
  config.validate();
  if (sample.empty()) throw InputError("no curves");
  if (covariates.rows() != static_cast<Eigen::Index>(sample.size())) {
    throw InputError("covariate table and curves differ in length");
  }
  for (std::size_t i = 0; i < sample.size(); ++i) {
    sample[i].validate();
    if (covariates.ids[i] != sample[i].id) {
      throw InputError("covariate row " + std::to_string(i) + " belongs to '" +
                       covariates.ids[i] + "', expected '" + sample[i].id + "'");
    }
  }
  std::vector<double> observed;
  for (const CurveSample& s : sample) observed.insert(observed.end(), s.grid.begin(), s.grid.end());
  BSplineBasis basis = BSplineBasis::build(config.response, observed);

  PreparedData data;
  data.sample = &sample;
  data.config = config;
  if (!pole) {
    pole = estimate_pole(sample, config.kind, basis, config.response_penalty, config.pole,
                         config.threads);
  }
  data.space = ResponseSpace(config.kind, basis, config.response_penalty, *pole, sample);
  data.caches = build_caches(data.space, sample, config.threads);

  std::vector<Eigen::MatrixXd> grams;
  for (const CurveCache& c : data.caches) grams.push_back(c.gram);
  std::vector<std::shared_ptr<const CovariateBasis>> built;
  for (const EffectSpec& spec : config.effects) {
    std::shared_ptr<const CovariateBasis> parent;
    if (!spec.nested_in.empty()) {
      for (std::size_t j = 0; j < built.size(); ++j) {
        if (config.effects[j].name == spec.nested_in) parent = built[j];
      }
    }
    Learner l;
    l.basis = CovariateBasis::build(spec, covariates, parent);
    l.design = l.basis.design(covariates);
    const Eigen::MatrixXd psi = assemble_psi_matrix(grams, l.design);
    l.calibration = df_to_lambda(psi, l.basis.penalty, data.space.penalty(), spec.df);
    spdlog::debug("effect '{}': m_j = {}, lambda = {:.4e}, df = {:.4f}", spec.name,
                  l.basis.dim(), l.calibration.lambda, l.calibration.df);
    built.push_back(std::make_shared<const CovariateBasis>(l.basis));
    data.learners.push_back(std::move(l));
  }
  return data;
}

BoostingRun run_boosting(const PreparedData& data, const std::vector<Eigen::Index>& train_in,
                         const std::vector<Eigen::Index>& holdout, int iterations) {
  const std::vector<CurveSample>& sample = *data.sample;
  const GeometryKind kind = data.space.kind();
  const Eigen::Index m = data.space.m();
  const std::vector<Eigen::Index> train =
      train_in.empty() ? iota_rows(static_cast<Eigen::Index>(sample.size())) : train_in;
  const bool all_rows = train.size() == sample.size();
  const std::size_t nt = train.size();
  const std::size_t nh = holdout.size();
  const std::size_t nl = data.learners.size();
  if (nl == 0) throw InputError("model has no effects");
  const int threads = data.config.threads;
  const double eta = data.config.eta;

  std::vector<Eigen::MatrixXd> grams;
  grams.reserve(sample.size());
  for (const CurveCache& c : data.caches) grams.push_back(c.gram);

  std::vector<Eigen::MatrixXd> psi(nl), inverse(nl);
  for (std::size_t j = 0; j < nl; ++j) {
    const Learner& l = data.learners[j];
    psi[j] = all_rows ? assemble_psi_matrix(grams, l.design)
                      : assemble_psi_matrix(grams, l.design, train);
    const PlsSolver solver(psi[j] + l.calibration.lambda * l.calibration.penalty);
    if (solver.pseudo_inverse()) {
      spdlog::warn("effect '{}': singular PLS system, using a pseudo-inverse",
                   l.basis.spec.name);
    }
    inverse[j] = solver.inverse();
  }

  BoostingRun run;
  for (const Learner& l : data.learners) run.theta.push_back(Eigen::MatrixXd::Zero(m, l.basis.dim()));
  Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(sample.size()));
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(sample.size()));
  std::vector<double> sq(nt), hsq(nh);
  std::vector<Eigen::VectorXcd> means(nt);

  const auto evaluate = [&] {
    parallel_for(nt, threads, [&](std::size_t s) {
      const Eigen::Index i = train[s];
      CurveState st = evaluate_curve(sample[i], data.caches[i], coef.col(i), kind);
      sq[s] = st.sq_dist;
      cross.col(i) = tangent_cross(data.caches[i], sample[i].weights, st.residual);
      means[s] = std::move(st.mean);
    });
    parallel_for(nh, threads, [&](std::size_t s) {
      const Eigen::Index i = holdout[s];
      hsq[s] = curve_sq_dist(sample[i], data.caches[i], coef.col(i), kind);
    });
    double total = 0.0;
    for (double v : sq) total += v;
    double htotal = 0.0;
    for (double v : hsq) htotal += v;
    if (!std::isfinite(total)) throw NumericalError("empirical risk is not finite");
    run.risk.push_back(total / static_cast<double>(nt));
    if (nh > 0) run.holdout_risk.push_back(htotal / static_cast<double>(nh));
    return total;
  };

  double total = evaluate();
  std::vector<Eigen::VectorXd> fits(nl);
  Eigen::VectorXd quad;
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> sse(nl);
    for (std::size_t j = 0; j < nl; ++j) {
      const Learner& l = data.learners[j];
      const Eigen::VectorXd rhs = all_rows ? assemble_psi_vector(cross, l.design)
                                           : assemble_psi_vector(cross, l.design, train);
      fits[j].noalias() = inverse[j] * rhs;
      quad.noalias() = psi[j] * fits[j];
      sse[j] = total - 2.0 * fits[j].dot(rhs) + fits[j].dot(quad);
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < nl; ++j) {
      if (sse[j] < sse[best]) best = j;
    }
    const Eigen::MatrixXd step = eta * unvec(fits[best], m);
    run.theta[best] += step;
    const Eigen::MatrixXd& b = data.learners[best].design;
    for (Eigen::Index i : train) coef.col(i).noalias() += step * b.row(i).transpose();
    for (Eigen::Index i : holdout) coef.col(i).noalias() += step * b.row(i).transpose();
    run.selection.push_back(static_cast<int>(best));
    run.sse.push_back(std::move(sse));
    total = evaluate();
  }
  run.fitted_mean = std::move(means);
  return run;
}

std::vector<int> assign_folds(Eigen::Index n, int folds, std::uint64_t seed) {
  if (folds < 2) throw InputError("folds must be at least 2");
  if (n < 2 * static_cast<Eigen::Index>(folds)) {
    throw InputError("cross-validation with " + std::to_string(folds) + " folds needs at least " +
                     std::to_string(2 * folds) + " curves, got " + std::to_string(n));
  }
  std::vector<Eigen::Index> perm = iota_rows(n);
  std::mt19937_64 rng(seed);
  for (Eigen::Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(perm[i], perm[j]);
  }
  std::vector<int> fold_of(static_cast<std::size_t>(n));
  for (Eigen::Index p = 0; p < n; ++p) fold_of[perm[p]] = static_cast<int>(p % folds);
  return fold_of;
}

CvResult cv_early_stop(const PreparedData& data) {
  const auto n = static_cast<Eigen::Index>(data.sample->size());
  const int k = data.config.folds;
  const int iters = data.config.iterations;
  CvResult out;
  out.fold_of = assign_folds(n, k, data.config.seed);
  out.fold_risk.resize(k, iters + 1);
  for (int f = 0; f < k; ++f) {
    std::vector<Eigen::Index> train, hold;
    for (Eigen::Index i = 0; i < n; ++i) (out.fold_of[i] == f ? hold : train).push_back(i);
    const BoostingRun run = run_boosting(data, train, hold, iters);
    for (int it = 0; it <= iters; ++it) out.fold_risk(f, it) = run.holdout_risk[it];
  }
  out.mean_risk.resize(iters + 1);
  for (int it = 0; it <= iters; ++it) out.mean_risk[it] = out.fold_risk.col(it).mean();
  out.m_stop = 0;
  for (int it = 1; it <= iters; ++it) {
    if (out.mean_risk[it] < out.mean_risk[out.m_stop]) out.m_stop = it;
  }
  return out;
}

Eigen::MatrixXd FittedModel::predictor_coef(const CovariateTable& table) const {
  Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(space.m(), table.rows());
  for (const FittedEffect& e : effects) {
    coef.noalias() += e.theta * e.basis.design(table).transpose();
  }
  return coef;
}

FittedModel make_model(const PreparedData& data, const BoostingRun& run) {
  FittedModel model;
  model.config = data.config;
  model.space = data.space;
  for (std::size_t j = 0; j < data.learners.size(); ++j) {
    const Learner& l = data.learners[j];
    model.effects.push_back({l.basis, run.theta[j], l.calibration.lambda, l.calibration.df,
                             l.calibration.clamped});
  }
  model.risk_trace = run.risk;
  model.selection_trace = run.selection;
  model.m_stop = static_cast<int>(run.selection.size());
  const std::vector<CurveSample>& sample = *data.sample;
  const auto n = static_cast<double>(sample.size());
  model.g0 = Eigen::MatrixXd::Zero(data.space.m(), data.space.m());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    model.g0 += sample[i].weights.real_gram(data.caches[i].raw_design);
  }
  model.g0 /= n;
  Eigen::Index total = 0;
  for (const Learner& l : data.learners) total += l.design.cols();
  Eigen::MatrixXd stacked(static_cast<Eigen::Index>(sample.size()), total);
  Eigen::Index col = 0;
  for (const Learner& l : data.learners) {
    stacked.middleCols(col, l.design.cols()) = l.design;
    col += l.design.cols();
  }
  model.covariate_gram = stacked.transpose() * stacked / n;
  if (data.config.weights == WeightRule::Gram) model.gram_weights = sample.front().weights.matrix();
  return model;
}

FittedModel boost_fit(const std::vector<CurveSample>& sample, const CovariateTable& covariates,
                      const BoostConfig& config, std::optional<PoleCoef> pole) {
  const PreparedData data = prepare(sample, covariates, config, std::move(pole));
  return make_model(data, run_boosting(data, {}, {}, config.iterations));
}

InnerProduct model_weights(const FittedModel& model, const Eigen::VectorXd& grid) {
  switch (model.config.weights) {
    case WeightRule::Uniform:
      return InnerProduct::diagonal(uniform_weights(grid.size()));
    case WeightRule::Gram:
      if (model.gram_weights.rows() != grid.size()) {
        throw InputError("gram-mode predictions need " + std::to_string(model.gram_weights.rows()) +
                         " grid points");
      }
      return InnerProduct::full(model.gram_weights);
    default:
      return InnerProduct::diagonal(trapezoid_weights(grid));
  }
}

Eigen::VectorXcd predict_mean(const FittedModel& model, const CovariateTable& table,
                              Eigen::Index row, const Eigen::VectorXd& grid,
                              const InnerProduct& ip) {
  const CovariateTable one = table.subset({row});
  const Eigen::VectorXd c = model.predictor_coef(one).col(0);
  const CurveCache cache = model.space.cache(grid, ip);
  const Eigen::VectorXcd h = cache.design * c.cast<Complex>();
  return exp_at_representative(cache.pole_rep, h, ip, model.space.kind());
}

std::vector<Eigen::VectorXcd> effect_evaluations(const FittedModel& model,
                                                 const std::vector<CurveSample>& sample,
                                                 const CovariateTable& table, int effect) {
  if (table.rows() != static_cast<Eigen::Index>(sample.size())) {
    throw InputError("covariate table and curves differ in length");
  }
  Eigen::MatrixXd coef;
  if (effect < 0) {
    coef = model.predictor_coef(table);
  } else {
    const FittedEffect& e = model.effects.at(static_cast<std::size_t>(effect));
    coef = e.theta * e.basis.design(table).transpose();
  }
  std::vector<Eigen::VectorXcd> out(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const CurveCache cache = model.space.cache(sample[i].grid, sample[i].weights);
    out[i] = cache.design * coef.col(static_cast<Eigen::Index>(i)).cast<Complex>();
  }
  return out;
}

double empirical_risk(const FittedModel& model, const std::vector<CurveSample>& sample,
                      const CovariateTable& table) {
  const Eigen::MatrixXd coef = model.predictor_coef(table);
  double total = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const CurveCache cache = model.space.cache(sample[i].grid, sample[i].weights);
    total += curve_sq_dist(sample[i], cache, coef.col(static_cast<Eigen::Index>(i)),
                           model.space.kind());
  }
  return total / static_cast<double>(sample.size());
}

double rmse_effect(const std::vector<Eigen::VectorXcd>& fitted,
                   const std::vector<Eigen::VectorXcd>& truth,
                   const std::vector<Eigen::VectorXcd>& total,
                   const std::vector<InnerProduct>& weights) {
  if (fitted.size() != truth.size() || truth.size() != total.size() ||
      total.size() != weights.size()) {
    throw InputError("rMSE inputs differ in length");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    num += weights[i].squared_norm(fitted[i] - truth[i]);
    den += weights[i].squared_norm(total[i]);
  }
  if (den == 0.0) throw NumericalError("rMSE denominator (predictor variance) is zero");
  return num / den;
}

}  // namespace shapeboost
