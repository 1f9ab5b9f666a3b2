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

#include "shapeboost/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "shapeboost/errors.hpp"
#include "shapeboost/linalg.hpp"

namespace shapeboost {

namespace {

constexpr Eigen::Index kDensePoints = 400;
constexpr double kAngleStep = 15.0;
constexpr double kAngleMax = 60.0;

Eigen::VectorXd dense_grid() {
  return Eigen::VectorXd::LinSpaced(kDensePoints, 0.0,
                                    1.0 - 1.0 / static_cast<double>(kDensePoints));
}

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

// Rotation taking the principal axis of a curve to the real axis, and the centroid.
std::pair<Complex, Complex> principal_frame(const Eigen::VectorXcd& curve) {
  const Complex c = curve.mean();
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (Eigen::Index j = 0; j < curve.size(); ++j) {
    const Eigen::Vector2d d((curve[j] - c).real(), (curve[j] - c).imag());
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
  const Eigen::Vector2d axis = es.eigenvectors().col(1);
  return {Complex(axis[0], axis[1]), c};
}

// Bulge that widens one end of the outline relative to the other.
Eigen::VectorXcd bulge_view(const Eigen::VectorXcd& curve) {
  const auto [axis, c] = principal_frame(curve);
  Eigen::VectorXcd w = (curve.array() - c) * std::conj(axis);
  const double half = w.real().cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    const double f = 1.0 + 0.3 * std::tanh(2.0 * w[j].real() / half);
    w[j] = Complex(w[j].real(), f * w[j].imag());
  }
  return (w.array() * axis + c).matrix();
}

struct Projection {
  Eigen::VectorXd coef;
  double relative_error = 0.0;
};

// Least-squares tangent coefficients of Log_p(target) on the dense grid.
Projection project_curve(const ResponseSpace& space, const Eigen::VectorXcd& target) {
  const Eigen::VectorXd grid = dense_grid();
  const InnerProduct ip = InnerProduct::diagonal(uniform_weights(kDensePoints));
  const CurveCache cache = space.cache(grid, ip);
  const Eigen::VectorXcd v = log_at_representative(cache.pole_rep, target, ip, space.kind());
  Projection p;
  p.coef = cache.gram.ldlt().solve(ip.real_cross(cache.design, v));
  const double nv = ip.norm(v);
  p.relative_error = nv > 1e-10 * ip.norm(cache.pole_rep) ? ip.norm(v - cache.design * p.coef.cast<Complex>()) / nv : 0.0;
  return p;
}

Eigen::VectorXcd pole_curve(const ResponseSpace& space) {
  return space.pole().evaluate(space.basis(), dense_grid());
}

// Three guaranteed indices plus independent Bernoulli draws among the rest.
std::vector<Eigen::Index> subsample(std::mt19937_64& rng, Eigen::Index k_ref, double mean_grid) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(k_ref));
  for (Eigen::Index j = 0; j < k_ref; ++j) idx[j] = j;
  for (Eigen::Index j = 0; j < 3; ++j) {
    std::uniform_int_distribution<Eigen::Index> pick(j, k_ref - 1);
    std::swap(idx[j], idx[pick(rng)]);
  }
  const double prob = k_ref > 3 ? std::clamp((mean_grid - 3.0) / (k_ref - 3.0), 0.0, 1.0) : 0.0;
  std::bernoulli_distribution keep(prob);
  std::vector<Eigen::Index> out(idx.begin(), idx.begin() + 3);
  for (Eigen::Index j = 3; j < k_ref; ++j) {
    if (keep(rng)) out.push_back(idx[j]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

InnerProduct sim_weights(WeightRule rule, const Eigen::VectorXd& grid) {
  return rule == WeightRule::Uniform ? InnerProduct::diagonal(uniform_weights(grid.size()))
                                     : InnerProduct::diagonal(trapezoid_weights(grid));
}

}  // namespace

Eigen::VectorXd TruthSpec::binary_coef(bool level1) const {
  return (level1 ? 0.5 : -0.5) * contrast;
}

Eigen::VectorXd TruthSpec::smooth_coef(double z1) const {
  return smooth * z_basis.row(z1).transpose();
}

std::vector<double> batch_angles() {
  std::vector<double> z;
  for (double a = -kAngleMax; a <= kAngleMax + 1e-9; a += kAngleStep) z.push_back(a);
  return z;
}

Eigen::VectorXcd builtin_outline(Eigen::Index points) {
  // Bottle profile: body, shoulder and neck, traced from the bottom center.
  const int fine = 8000;
  std::vector<Complex> poly(fine + 1);
  for (int s = 0; s <= fine; ++s) {
    const double phi = 2.0 * std::numbers::pi * s / fine;
    const double y = -std::cos(phi);
    const double w = 0.12 + 0.26 * (1.0 - smoothstep((y - 0.15) / 0.4));
    const double sn = std::sin(phi);
    const double x = w * (sn >= 0 ? 1.0 : -1.0) * std::pow(std::abs(sn), 0.35);
    poly[s] = Complex(x, y);
  }
  std::vector<double> arc(fine + 1, 0.0);
  for (int s = 1; s <= fine; ++s) arc[s] = arc[s - 1] + std::abs(poly[s] - poly[s - 1]);
  Eigen::VectorXcd out(points);
  int seg = 0;
  for (Eigen::Index j = 0; j < points; ++j) {
    const double target = arc.back() * static_cast<double>(j) / static_cast<double>(points);
    while (seg < fine - 1 && arc[seg + 1] < target) ++seg;
    const double len = arc[seg + 1] - arc[seg];
    const double f = len > 0.0 ? (target - arc[seg]) / len : 0.0;
    out[j] = poly[seg] + f * (poly[seg + 1] - poly[seg]);
  }
  return out;
}

Eigen::VectorXcd tilt_view(const Eigen::VectorXcd& curve, double degrees) {
  const auto [axis, c] = principal_frame(curve);
  const Eigen::VectorXcd w = (curve.array() - c) * std::conj(axis);
  const double alpha = degrees * std::numbers::pi / 180.0;
  const double dist = 3.0 * w.cwiseAbs().maxCoeff();
  Eigen::VectorXcd out(curve.size());
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    const double depth = w[j].imag() * std::sin(alpha);
    const double persp = dist / (dist - depth);
    out[j] = axis * Complex(w[j].real() * persp, w[j].imag() * std::cos(alpha) * persp) + c;
  }
  return out;
}

TruthSpec gen_truth(GeometryKind kind, const std::vector<CurveSample>& template_curves) {
  const SplineConfig response{.degree = 3, .n_knots = 27, .cyclic = true,
                              .knot_rule = KnotRule::Equidistant};
  const BSplineBasis basis = BSplineBasis::build(response, {}, 0.0, 1.0);
  const Eigen::VectorXd grid = dense_grid();
  const InnerProduct ip = InnerProduct::diagonal(uniform_weights(kDensePoints));
  Eigen::VectorXcd outline;
  if (template_curves.empty()) {
    outline = builtin_outline(kDensePoints);
  } else {
    const PoleCoef mean = estimate_pole(template_curves, GeometryKind::Form, basis,
                                        PenaltyKind::SecondDiff, PoleOptions{});
    outline = mean.evaluate(basis, grid);
  }
  PoleCoef pole;
  pole.coef = pooled_spline_fit({basis.design(grid)}, {center(outline, ip)}, {ip},
                                basis.penalty(PenaltyKind::SecondDiff), 1e-8);
  Eigen::VectorXcd fitted = basis.design(grid).cast<Complex>() * pole.coef;
  if (ip.norm(center(fitted, ip)) < 1e-12) throw DegenerateAlignment("template outline is degenerate");
  if (kind == GeometryKind::Shape) {
    pole.coef /= ip.norm(center(fitted, ip));
    fitted = basis.design(grid).cast<Complex>() * pole.coef;
  }
  CurveSample ref{"pole", grid, fitted, ip};
  TruthSpec truth;
  truth.space = ResponseSpace(kind, basis, PenaltyKind::SecondDiff, pole, {ref});

  const std::vector<double> angles = batch_angles();
  const Eigen::Index m = truth.space.m();
  Eigen::MatrixXd family(m, static_cast<Eigen::Index>(angles.size()));
  for (std::size_t a = 0; a < angles.size(); ++a) {
    const Projection p = project_curve(truth.space, tilt_view(fitted, angles[a]));
    family.col(static_cast<Eigen::Index>(a)) = p.coef;
    truth.projection_error = std::max(truth.projection_error, p.relative_error);
  }
  truth.z_basis = BSplineBasis::build(
      {.degree = 3, .n_knots = 4, .cyclic = false, .knot_rule = KnotRule::Equidistant}, {},
      -kAngleMax, kAngleMax);
  Eigen::VectorXd zs(static_cast<Eigen::Index>(angles.size()));
  for (std::size_t a = 0; a < angles.size(); ++a) zs[static_cast<Eigen::Index>(a)] = angles[a];
  const Eigen::MatrixXd bz = truth.z_basis.design(zs);
  const Eigen::MatrixXd raw = family * bz * symmetric_pinv(bz.transpose() * bz);
  // Spline coefficients reproducing 1 and z, to remove the linear trend
  // within the spline space.
  const Eigen::VectorXd zd = Eigen::VectorXd::LinSpaced(60, -kAngleMax, kAngleMax);
  const Eigen::MatrixXd bd = truth.z_basis.design(zd);
  const auto qr = bd.colPivHouseholderQr();
  const Eigen::VectorXd one = qr.solve(Eigen::VectorXd::Ones(zd.size()));
  const Eigen::VectorXd lin = qr.solve(zd);
  const Eigen::MatrixXd at_design = raw * bz.transpose();
  Eigen::MatrixXd x(zs.size(), 2);
  x.col(0).setOnes();
  x.col(1) = zs;
  const Eigen::MatrixXd trend = at_design * x * (x.transpose() * x).inverse();  // m x 2
  truth.smooth = raw - trend.col(0) * one.transpose() - trend.col(1) * lin.transpose();
  truth.contrast = project_curve(truth.space, bulge_view(fitted)).coef;
  return truth;
}

Eigen::VectorXd tilt_coef(const TruthSpec& truth, double z1) {
  return project_curve(truth.space, tilt_view(pole_curve(truth.space), z1)).coef;
}

void SimConfig::validate() const {
  if (n <= 0 || n % 18 != 0) throw InputError("n must be a positive multiple of 18");
  if (mean_grid < 3.0) throw InputError("mean grid size must be at least 3");
  if (noise == NoiseMode::GaussianTangent && mean_grid > static_cast<double>(reference_grid)) {
    throw InputError("mean grid size exceeds the reference grid");
  }
  if (!(length_scale > 0.0)) throw InputError("length scale must be positive");
  if (amplitude < 0.0) throw InputError("noise amplitude must be nonnegative");
  if (noise_to_signal && *noise_to_signal < 0.0) throw InputError("noise-to-signal must be nonnegative");
  if (weights == WeightRule::Gram) throw InputError("simulation supports trapezoid, uniform or column weights");
  if (noise == NoiseMode::ResamplePool) {
    if (pool.empty()) throw InputError("resampling needs a nonempty residual pool");
    for (const CurveSample& s : pool) {
      if (s.size() < 3) throw InputError("pool curve '" + s.id + "' has fewer than 3 evaluations");
    }
  }
}

SimDataset gen_dataset(const TruthSpec& truth, const SimConfig& cfg) {
  cfg.validate();
  const GeometryKind kind = truth.space.kind();
  const BSplineBasis& basis = truth.space.basis();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(-kAngleMax, kAngleMax);

  SimDataset out;
  out.effect_names = {"binary", "smooth"};
  out.truth.assign(2, {});
  const std::vector<double> angles = batch_angles();
  std::vector<std::string> kappa;
  std::vector<double> z1, z2;
  for (Eigen::Index b = 0; b < cfg.n / 18; ++b) {
    for (int level = 0; level < 2; ++level) {
      for (double z : angles) {
        kappa.push_back(level ? "k1" : "k0");
        z1.push_back(z);
      }
    }
  }
  const auto n = static_cast<std::size_t>(cfg.n);
  for (std::size_t i = 0; i < n; ++i) z2.push_back(unif(rng));

  // Correlation of the noise coefficients decays with cyclic index distance.
  const Eigen::Index m0 = basis.dim();
  Eigen::MatrixXd corr(m0, m0);
  for (Eigen::Index a = 0; a < m0; ++a)
    for (Eigen::Index b = 0; b < m0; ++b) {
      Eigen::Index d = std::abs(a - b);
      if (basis.config().cyclic) d = std::min(d, m0 - d);
      corr(a, b) = std::exp(-static_cast<double>(d) / cfg.length_scale);
    }
  const Eigen::MatrixXd chol = corr.llt().matrixL();

  std::vector<Eigen::VectorXcd> noise(n), poles(n);
  std::vector<InnerProduct> weights(n);
  double signal = 0.0, noise_energy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    CurveSample s;
    s.id = "sim" + std::to_string(i + 1);
    Eigen::VectorXcd pool_values;
    if (cfg.noise == NoiseMode::ResamplePool) {
      std::uniform_int_distribution<std::size_t> pick(0, cfg.pool.size() - 1);
      const CurveSample& src = cfg.pool[pick(rng)];
      const std::vector<Eigen::Index> idx = subsample(rng, src.size(), cfg.mean_grid);
      s.grid.resize(static_cast<Eigen::Index>(idx.size()));
      pool_values.resize(s.grid.size());
      for (std::size_t j = 0; j < idx.size(); ++j) {
        s.grid[j] = src.grid[idx[j]];
        pool_values[j] = src.values[idx[j]];
      }
    } else {
      const std::vector<Eigen::Index> idx = subsample(rng, cfg.reference_grid, cfg.mean_grid);
      s.grid.resize(static_cast<Eigen::Index>(idx.size()));
      for (std::size_t j = 0; j < idx.size(); ++j) {
        s.grid[j] = static_cast<double>(idx[j]) / static_cast<double>(cfg.reference_grid);
      }
    }
    s.weights = sim_weights(cfg.weights, s.grid);
    const CurveCache cache = truth.space.cache(s.grid, s.weights);
    const Eigen::VectorXd cb = truth.binary_coef(kappa[i] == "k1");
    const Eigen::VectorXd cs = truth.smooth_coef(z1[i]);
    out.truth[0].push_back(cache.design * cb.cast<Complex>());
    out.truth[1].push_back(cache.design * cs.cast<Complex>());
    out.total.push_back(out.truth[0].back() + out.truth[1].back());
    out.true_mean.push_back(exp_at_representative(cache.pole_rep, out.total.back(), s.weights, kind));
    if (cfg.noise == NoiseMode::ResamplePool) {
      noise[i] = project_tangent(cache.pole_rep, pool_values, s.weights, kind);
    } else {
      Eigen::VectorXcd a(m0);
      for (Eigen::Index l = 0; l < m0; ++l) a[l] = Complex(gauss(rng), gauss(rng));
      const Eigen::VectorXcd field = cache.basis_rows.cast<Complex>() * (chol.cast<Complex>() * a);
      noise[i] = project_tangent(cache.pole_rep, field, s.weights, kind);
    }
    signal += s.weights.squared_norm(out.total.back());
    noise_energy += s.weights.squared_norm(noise[i]);
    poles[i] = cache.pole_rep;
    weights[i] = s.weights;
    s.values = out.true_mean.back();
    out.sample.push_back(std::move(s));
  }
  double amp = cfg.amplitude;
  const double target =
      cfg.noise_to_signal.value_or(kind == GeometryKind::Form ? 1.05 : 0.65);
  if (cfg.calibrate) {
    if (target == 0.0) {
      amp = 0.0;
    } else {
      if (noise_energy == 0.0 || signal == 0.0) throw NumericalError("cannot calibrate noise amplitude");
      amp = std::sqrt(target * signal / noise_energy);
    }
  }
  double realized = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::VectorXcd& mu = out.true_mean[i];
    const Eigen::VectorXcd eps = transport_between(poles[i], mu, amp * noise[i], weights[i], kind);
    out.sample[i].values = exp_at_representative(mu, eps, weights[i], kind);
    realized += weights[i].squared_norm(log_at_representative(mu, out.sample[i].values, weights[i], kind));
  }
  out.noise_to_signal = signal > 0.0 ? realized / signal : 0.0;

  if (!cfg.pre_aligned) {
    // Componentwise spread of the pooled coordinates.
    double sr = 0, si = 0, qr = 0, qi = 0, count = 0;
    for (const CurveSample& s : out.sample) {
      sr += s.values.real().sum();
      si += s.values.imag().sum();
      qr += s.values.real().squaredNorm();
      qi += s.values.imag().squaredNorm();
      count += static_cast<double>(s.size());
    }
    const double sd_re = std::sqrt(std::max(0.0, qr / count - (sr / count) * (sr / count)));
    const double sd_im = std::sqrt(std::max(0.0, qi / count - (si / count) * (si / count)));
    std::normal_distribution<double> omega(0.0, std::numbers::pi / 20.0);
    std::gamma_distribution<double> scale(100.0, 0.01);
    for (CurveSample& s : out.sample) {
      const double w = omega(rng);
      const double lambda = kind == GeometryKind::Shape ? scale(rng) : 1.0;
      const Complex shift(sd_re * gauss(rng), sd_im * gauss(rng));
      s.values = (std::polar(lambda, w) * s.values.array() + shift).matrix();
    }
  }
  for (const CurveSample& s : out.sample) out.table.ids.push_back(s.id);
  out.table.add_column("kappa", kappa);
  out.table.add_numeric("z1", z1);
  out.table.add_numeric("z2", z2);
  return out;
}

std::vector<EffectSpec> simulation_effects(bool nuisance, double df) {
  const auto make = [df](std::string name, EffectKind kind, std::vector<std::string> cov) {
    EffectSpec e;
    e.name = std::move(name);
    e.kind = kind;
    e.covariates = std::move(cov);
    e.df = df;
    return e;
  };
  std::vector<EffectSpec> out{make("binary", EffectKind::Categorical, {"kappa"}),
                              make("smooth", EffectKind::Smooth, {"z1"})};
  if (nuisance) {
    out.push_back(make("constant", EffectKind::Constant, {}));
    out.push_back(make("linear", EffectKind::Linear, {"z1"}));
    out.push_back(make("smooth2", EffectKind::Smooth, {"z2"}));
  }
  return out;
}

std::vector<Eigen::VectorXcd> effect_at_true_pole(const FittedModel& model,
                                                  const TruthSpec& truth,
                                                  const std::vector<CurveSample>& sample,
                                                  const CovariateTable& table, int effect) {
  std::vector<Eigen::VectorXcd> evals = effect_evaluations(model, sample, table, effect);
  const GeometryKind kind = model.space.kind();
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const InnerProduct& ip = sample[i].weights;
    const Eigen::VectorXcd est = pole_representative(
        model.space.pole().evaluate(model.space.basis(), sample[i].grid), ip, kind);
    const Eigen::VectorXcd target = pole_representative(
        truth.space.pole().evaluate(truth.space.basis(), sample[i].grid), ip, kind);
    const Alignment al = align_to_representative(est, target, ip, kind);
    const Eigen::VectorXcd moved = al.rotation * evals[i];
    evals[i] = transport_between(al.values, target, project_tangent(al.values, moved, ip, kind),
                                 ip, kind);
  }
  return evals;
}

std::vector<double> simulation_rmse(const FittedModel& model, const TruthSpec& truth,
                                    const SimDataset& data) {
  std::vector<InnerProduct> weights;
  for (const CurveSample& s : data.sample) weights.push_back(s.weights);
  std::vector<double> out;
  for (std::size_t j = 0; j < model.effects.size(); ++j) {
    const std::string& name = model.effects[j].basis.spec.name;
    std::vector<Eigen::VectorXcd> ref;
    for (std::size_t e = 0; e < data.effect_names.size(); ++e) {
      if (data.effect_names[e] == name) ref = data.truth[e];
    }
    if (ref.empty()) {
      for (const CurveSample& s : data.sample) ref.push_back(Eigen::VectorXcd::Zero(s.size()));
    }
    const std::vector<Eigen::VectorXcd> fitted =
        effect_at_true_pole(model, truth, data.sample, data.table, static_cast<int>(j));
    out.push_back(rmse_effect(fitted, ref, data.total, weights));
  }
  return out;
}

std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the combined key.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace shapeboost
