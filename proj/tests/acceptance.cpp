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

// Acceptance runner: prints one PASS/FAIL line per criterion. Arguments
// restrict the run to the listed criterion numbers.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shapeboost/basis.hpp"
#include "shapeboost/boost.hpp"
#include "shapeboost/bspline.hpp"
#include "shapeboost/effects.hpp"
#include "shapeboost/factorize.hpp"
#include "shapeboost/geometry.hpp"
#include "shapeboost/io.hpp"
#include "shapeboost/linalg.hpp"
#include "shapeboost/simulate.hpp"
#include "support/boost_oracles.hpp"
#include "support/oracles.hpp"

using namespace shapeboost;
using namespace shapeboost::testing;

namespace {

constexpr GeometryKind kKinds[] = {GeometryKind::Form, GeometryKind::Shape};

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Tracks the worst value of a quantity against its bound.
struct Worst {
  std::string name;
  double bound;
  double value = 0.0;
  void see(double v) { value = std::max(value, std::isnan(v) ? 1e300 : v); }
  bool ok() const { return value <= bound; }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome summarize(const std::vector<Worst>& checks) {
  Outcome o;
  for (const Worst& w : checks) {
    o.pass = o.pass && w.ok();
    if (!o.detail.empty()) o.detail += ", ";
    o.detail += w.name + " " + fmt("%.2e", w.value) + (w.ok() ? " <= " : " > ") + fmt("%.0e", w.bound);
  }
  return o;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Risk at the stopping iteration versus iteration 0, for criterion 9.
struct RiskRecord {
  std::string label;
  double start;
  double stop;
};
std::vector<RiskRecord> g_runs;

void record(const std::string& label, const FittedModel& model) {
  g_runs.push_back({label, model.risk_trace.front(), model.risk_trace.back()});
}

Complex random_similarity(Rng& rng, GeometryKind kind, Complex* shift) {
  *shift = Complex(normal(rng, 5.0), normal(rng, 5.0));
  const double scale = kind == GeometryKind::Shape ? std::exp(uniform(rng, -2.0, 2.0)) : 1.0;
  return std::polar(scale, uniform(rng, -std::numbers::pi, std::numbers::pi));
}

Eigen::VectorXcd apply(const Eigen::VectorXcd& y, Complex a, Complex b) {
  return (a * y.array() + b).matrix();
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  Worst inv{"log-exp", 1e-8}, dist{"distance", 1e-8};
  Rng rng(101);
  for (GeometryKind kind : kKinds) {
    for (int rep = 0; rep < 200; ++rep) {
      const Eigen::Index k = 3 + static_cast<Eigen::Index>(rng() % 118);
      const Eigen::VectorXd grid = random_grid(rng, k);
      const InnerProduct ip = random_weights(rng, grid, rep % 2 == 0);
      const Eigen::VectorXcd p = random_curve(rng, grid);
      const Eigen::VectorXcd p_rep = pole_representative(p, ip, kind);
      const double cap =
          kind == GeometryKind::Form ? 0.9 * ip.norm(p_rep) : std::numbers::pi / 2.0 - 0.1;
      const double nb = cap * uniform(rng);
      const Eigen::VectorXcd beta = random_tangent(rng, p_rep, ip, kind, nb);
      const Eigen::VectorXcd y = exp_map(p, beta, ip, kind);
      const TangentEvals l = log_map(p, y, ip, kind);
      inv.see(ip.norm(l.values - beta) / std::max(1.0, nb));
      dist.see(std::abs(geodesic_dist(y, p, ip, kind) - nb));
    }
  }
  const double secs = seconds_since(t0);
  Outcome o = summarize({inv, dist});
  o.pass = o.pass && secs < 10.0;
  o.detail += ", " + fmt("%.2f", secs) + " s (limit 10 s)";
  return o;
}

Outcome criterion2() {
  Worst iso{"isometry", 1e-10}, tangency{"tangency", 1e-8}, identity{"geodesic identity", 1e-8},
      same{"identity transport", 1e-12};
  Rng rng(202);
  for (GeometryKind kind : kKinds) {
    for (int rep = 0; rep < 200; ++rep) {
      const Eigen::Index k = 3 + static_cast<Eigen::Index>(rng() % 118);
      const Eigen::VectorXd grid = random_grid(rng, k);
      const InnerProduct ip = random_weights(rng, grid, rep % 2 == 0);
      const Eigen::VectorXcd p = random_curve(rng, grid);
      const Eigen::VectorXcd p_rep = pole_representative(p, ip, kind);
      const Eigen::VectorXcd y = random_curve(rng, grid, 0.5);
      const Eigen::VectorXcd y_rep = representative(y, p, ip, kind).values;
      const Eigen::VectorXcd eps = random_tangent(rng, y_rep, ip, kind, uniform(rng, 0.01, 2.0));
      const Eigen::VectorXcd moved = transport_between(y_rep, p_rep, eps, ip, kind);
      iso.see(std::abs(ip.norm(moved) - ip.norm(eps)));
      tangency.see(tangent_defect(p_rep, moved, ip, kind).max());
      const Eigen::VectorXcd log_py = log_at_representative(p_rep, y_rep, ip, kind);
      const Eigen::VectorXcd log_yp = log_at_representative(y_rep, p_rep, ip, kind);
      identity.see(ip.norm(transport_between(p_rep, y_rep, log_py, ip, kind) + log_yp));
      same.see(ip.norm(transport_between(p_rep, p_rep, log_py, ip, kind) - log_py));
    }
  }
  return summarize({iso, tangency, identity, same});
}

// Per-curve residual norms at the fitted means.
std::vector<double> residual_norms(const FittedModel& model, const Dataset& d) {
  const Eigen::MatrixXd coef = model.predictor_coef(d.table);
  std::vector<double> out;
  for (std::size_t i = 0; i < d.sample.size(); ++i) {
    const CurveSample& s = d.sample[i];
    const CurveCache cache = model.space.cache(s.grid, s.weights);
    const CurveState st =
        evaluate_curve(s, cache, coef.col(static_cast<Eigen::Index>(i)), model.space.kind());
    out.push_back(s.weights.norm(st.residual));
  }
  return out;
}

Outcome criterion3() {
  Worst dist{"distances", 1e-8}, resid{"residuals", 1e-8}, risk{"risk traces", 1e-8};
  Rng rng(303);
  for (GeometryKind kind : kKinds) {
    for (int rep = 0; rep < 100; ++rep) {
      const Eigen::VectorXd grid = random_grid(rng, 3 + static_cast<Eigen::Index>(rng() % 60));
      const InnerProduct ip = random_weights(rng, grid, rep % 2 == 0);
      const Eigen::VectorXcd a = random_curve(rng, grid), b = random_curve(rng, grid);
      Complex sa, sb;
      const Complex ra = random_similarity(rng, kind, &sa), rb = random_similarity(rng, kind, &sb);
      const double d0 = geodesic_dist(a, b, ip, kind);
      const double d1 = geodesic_dist(apply(a, ra, sa), apply(b, rb, sb), ip, kind);
      dist.see(std::abs(d1 - d0) / d0);
    }
    for (int rep = 0; rep < 3; ++rep) {
      const Dataset d = make_dataset(rng, 16, 0.05);
      BoostConfig cfg = small_config(kind);
      cfg.effects = five_effects();
      cfg.iterations = 20;
      cfg.eta = 0.3;
      Dataset moved = d;
      for (CurveSample& s : moved.sample) {
        Complex shift;
        const Complex rot = random_similarity(rng, kind, &shift);
        s.values = apply(s.values, rot, shift);
      }
      const FittedModel fa = boost_fit(d.sample, d.table, cfg);
      const FittedModel fb = boost_fit(moved.sample, moved.table, cfg);
      record("invariance", fa);
      record("invariance", fb);
      if (fa.risk_trace.size() != fb.risk_trace.size()) {
        risk.see(1e300);
        continue;
      }
      for (std::size_t it = 0; it < fa.risk_trace.size(); ++it) {
        risk.see(std::abs(fa.risk_trace[it] - fb.risk_trace[it]) / fa.risk_trace[it]);
      }
      const std::vector<double> na = residual_norms(fa, d), nb = residual_norms(fb, moved);
      for (std::size_t i = 0; i < na.size(); ++i) resid.see(std::abs(na[i] - nb[i]) / na[i]);
    }
  }
  return summarize({dist, resid, risk});
}

Outcome criterion4() {
  Worst solve{"dense solve", 1e-8}, kron_diff{"kron assembly", 0.0}, df{"df target", 1e-4},
      rank{"rank at lambda=0", 0.0};
  Rng rng(404);
  for (int rep = 0; rep < 50; ++rep) {
    const Eigen::Index m = 1 + rep % 8, mj = 1 + (rep / 8) % 6, n = 12;
    std::vector<Eigen::MatrixXd> grams;
    Eigen::MatrixXd cross(m, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::MatrixXd a = random_matrix(rng, m + 2, m);
      grams.push_back(a.transpose() * a);
      cross.col(i) = random_matrix(rng, m, 1);
    }
    const Eigen::MatrixXd b = random_matrix(rng, n, mj);
    const Eigen::MatrixXd psi = assemble_psi_matrix(grams, b);
    const Eigen::VectorXd rhs = assemble_psi_vector(cross, b);
    const Eigen::MatrixXd pj = random_spd(rng, mj, 0.0), pp = random_spd(rng, m, 0.0);
    const double lj = uniform(rng, 0.01, 2.0), lp = uniform(rng, 0.01, 2.0);
    const Eigen::MatrixXd r = kron_penalty(pj, pp, lj, lp);
    kron_diff.see((r - dense_kron_penalty(pj, pp, lj, lp)).cwiseAbs().maxCoeff());
    const PlsResult sol = pls_solve(psi, rhs, r, m);
    const Eigen::VectorXd dense = (psi + r).fullPivLu().solve(rhs);
    solve.see((vec(sol.theta) - dense).norm() / std::max(1.0, dense.norm()));

    Eigen::MatrixXd diff = second_difference(std::max<Eigen::Index>(m, 3), true);
    diff = diff.transpose() * diff;
    const Eigen::MatrixXd pen = m >= 3 ? diff : Eigen::MatrixXd::Identity(m, m).eval();
    const Eigen::MatrixXd pj_id = Eigen::MatrixXd::Identity(mj, mj);
    const double full = static_cast<double>(psd_rank(psi));
    rank.see(std::abs(effective_df(psi, augmented_penalty(pj_id, pen), 0.0) - full));
    if (full > 0.7) {
      const double target = uniform(rng, 0.5, full - 0.2);
      df.see(std::abs(df_to_lambda(psi, pj_id, pen, target).df - target));
    }
  }
  return summarize({solve, kron_diff, df, rank});
}

double emp_norm2(const Eigen::MatrixXd& d, const Eigen::MatrixXd& g0, const Eigen::MatrixXd& g1) {
  return std::max(0.0, (d * g1 * d.transpose() * g0).trace());
}

Outcome criterion5() {
  Worst agree{"cholesky vs qr", 1e-8}, recon{"reconstruction", 1e-8},
      trunc{"truncation excess", 0.0}, svd{"identity-Gram SVD", 1e-8};
  Rng rng(505);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::Index m = 3 + rep % 5, mj = 2 + rep % 4;
    const Eigen::MatrixXd s0 = random_matrix(rng, 3 * m, m), s1 = random_matrix(rng, 3 * mj, mj);
    const Eigen::MatrixXd g0 = s0.transpose() * s0, g1 = s1.transpose() * s1;
    const Eigen::MatrixXd theta = random_matrix(rng, m, mj);
    const Factorization a = factorize(theta, g0, g1);
    const Factorization b = factorize(theta, qr_root(s0), qr_root(s1));
    agree.see((a.singular_values - b.singular_values).norm() / a.singular_values.norm());
    const Eigen::Index full = a.components();
    recon.see(std::sqrt(emp_norm2(theta - a.reconstruct(full), g0, g1) / a.total_variance));
    for (Eigen::Index l = 1; l < full; ++l) {
      const double best = emp_norm2(theta - a.reconstruct(l), g0, g1);
      for (int alt = 0; alt < 100; ++alt) {
        const Eigen::MatrixXd cand = random_matrix(rng, m, l) * random_matrix(rng, mj, l).transpose();
        trunc.see((best - emp_norm2(theta - cand, g0, g1)) / a.total_variance);
      }
    }
    const Factorization plain = factorize(theta, Eigen::MatrixXd::Identity(m, m),
                                          Eigen::MatrixXd::Identity(mj, mj));
    const Eigen::VectorXd ref = Eigen::JacobiSVD<Eigen::MatrixXd>(theta).singularValues();
    svd.see((plain.singular_values - ref.head(plain.components())).norm() / ref.norm());
  }
  return summarize({agree, recon, trunc, svd});
}

Outcome criterion6() {
  Worst mid{"midpoint equidistance", 1e-6}, stat{"stationarity", 1e-6};
  Rng rng(606);
  for (GeometryKind kind : kKinds) {
    BoostConfig cfg = small_config(kind);
    for (int rep = 0; rep < 5; ++rep) {
      const Eigen::VectorXd grid = landmark_grid(24);
      const std::vector<double> observed(grid.begin(), grid.end());
      const BSplineBasis basis = BSplineBasis::build(cfg.response, observed);
      std::vector<CurveSample> sample;
      for (int c = 0; c < 2; ++c) {
        CurveSample s;
        s.id = "y" + std::to_string(c);
        s.grid = grid;
        s.values = basis.design(grid).cast<Complex>() * random_complex(rng, basis.dim());
        s.weights = InnerProduct::diagonal(trapezoid_weights(grid));
        sample.push_back(std::move(s));
      }
      const PoleCoef pole =
          estimate_pole(sample, kind, basis, cfg.response_penalty, cfg.pole);
      const Eigen::VectorXcd p = pole.evaluate(basis, grid);
      const InnerProduct& ip = sample[0].weights;
      const double d12 = geodesic_dist(sample[0].values, sample[1].values, ip, kind);
      const double d1 = geodesic_dist(sample[0].values, p, ip, kind);
      const double d2 = geodesic_dist(sample[1].values, p, ip, kind);
      mid.see(std::max(std::abs(d1 - d12 / 2), std::abs(d2 - d12 / 2)));
    }
  }
  for (int rep = 0; rep < 10; ++rep) {
    const GeometryKind kind = kKinds[rep % 2];
    const Dataset d = make_dataset(rng, 12 + rep, 0.1);
    const BoostConfig cfg = small_config(kind);
    std::vector<double> observed;
    for (const auto& s : d.sample) observed.insert(observed.end(), s.grid.begin(), s.grid.end());
    const BSplineBasis basis = BSplineBasis::build(cfg.response, observed);
    const PoleCoef pole = estimate_pole(d.sample, kind, basis, cfg.response_penalty, cfg.pole);
    const ResponseSpace space(kind, basis, cfg.response_penalty, pole, d.sample);
    stat.see(frechet_stationarity(d.sample, space));
  }
  return summarize({mid, stat});
}

bool is_nuisance(const std::string& name) {
  return name != "binary" && name != "smooth";
}

Outcome criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr int kReplicates = 20;
  Outcome o;
  std::string detail;
  for (GeometryKind kind : kKinds) {
    const TruthSpec truth = gen_truth(kind);
    std::map<Eigen::Index, std::map<std::string, double>> medians;
    for (Eigen::Index n : {Eigen::Index{54}, Eigen::Index{162}}) {
      std::map<std::string, std::vector<double>> rmse;
      double nuisance_steps = 0, steps = 0;
      for (int r = 0; r < kReplicates; ++r) {
        SimConfig sc;
        sc.n = n;
        sc.seed = replicate_seed(1000 * (kind == GeometryKind::Form ? 1 : 2) + n, r);
        const SimDataset d = gen_dataset(truth, sc);
        BoostConfig bc;
        bc.kind = kind;
        bc.effects = simulation_effects(true);
        bc.iterations = 1000;
        bc.folds = 5;
        bc.seed = sc.seed;
        const PreparedData data = prepare(d.sample, d.table, bc);
        const CvResult cv = cv_early_stop(data);
        const FittedModel model = make_model(data, run_boosting(data, {}, {}, cv.m_stop));
        record("simulation", model);
        const std::vector<double> err = simulation_rmse(model, truth, d);
        for (std::size_t j = 0; j < err.size(); ++j) {
          rmse[model.effects[j].basis.spec.name].push_back(err[j]);
        }
        for (int s : model.selection_trace) {
          nuisance_steps += is_nuisance(model.effects[s].basis.spec.name);
          steps += 1;
        }
      }
      std::fprintf(stderr, "  simulation %s n=%ld done at %.0f s\n",
                   std::string(to_string(kind)).c_str(), static_cast<long>(n), seconds_since(t0));
      auto& med = medians[n];
      for (const auto& [name, v] : rmse) med[name] = median(v);
      const double share = steps > 0 ? nuisance_steps / steps : 0.0;
      double worst_nuisance = 0;
      for (const auto& [name, v] : med) {
        if (is_nuisance(name)) worst_nuisance = std::max(worst_nuisance, v);
      }
      const bool ok = share < 0.5 && worst_nuisance <= 0.02 &&
                      (n != 54 || (med["smooth"] <= 0.10 && med["binary"] <= 0.05));
      o.pass = o.pass && ok;
      detail += std::string(detail.empty() ? "" : "; ") + std::string(to_string(kind)) + " n=" +
                std::to_string(n) + " smooth " + fmt("%.4f", med["smooth"]) + " binary " +
                fmt("%.4f", med["binary"]) + " nuisance share " + fmt("%.3f", share) +
                " max nuisance rmse " + fmt("%.4f", worst_nuisance);
    }
    for (const char* name : {"smooth", "binary"}) {
      if (!(medians[162][name] < medians[54][name])) {
        o.pass = false;
        detail += std::string("; ") + std::string(to_string(kind)) + " " + name +
                  " median does not decrease";
      }
    }
  }
  const double secs = seconds_since(t0);
  o.pass = o.pass && secs <= 900.0;
  o.detail = detail + "; " + fmt("%.0f", secs) + " s (limit 900 s)";
  return o;
}

// Normalized real inner product of the functions behind two tangent
// coefficient vectors, both evaluated at the true pole.
double direction_correlation(const FittedModel& model, const Eigen::VectorXd& est,
                             const TruthSpec& truth, const Eigen::VectorXd& ref) {
  const GeometryKind kind = model.space.kind();
  const Eigen::Index k = 200;
  Eigen::VectorXd grid(k);
  for (Eigen::Index j = 0; j < k; ++j) grid[j] = static_cast<double>(j) / k;
  const InnerProduct ip = InnerProduct::diagonal(uniform_weights(k));
  const CurveCache ce = model.space.cache(grid, ip);
  const CurveCache ct = truth.space.cache(grid, ip);
  const Alignment al = align_to_representative(ce.pole_rep, ct.pole_rep, ip, kind);
  const Eigen::VectorXcd moved = al.rotation * (ce.design * est.cast<Complex>());
  const Eigen::VectorXcd a = transport_between(
      al.values, ct.pole_rep, project_tangent(al.values, moved, ip, kind), ip, kind);
  const Eigen::VectorXcd b = ct.design * ref.cast<Complex>();
  const Eigen::VectorXcd wb = ip.apply(b);
  return std::abs(a.dot(wb).real()) / (ip.norm(a) * ip.norm(b));
}

Outcome criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  for (GeometryKind kind : kKinds) {
    const TruthSpec truth = gen_truth(kind);
    SimConfig sc;
    sc.n = 720;
    sc.mean_grid = 3;
    sc.seed = 808;
    const SimDataset d = gen_dataset(truth, sc);
    Eigen::Index max_k = 0;
    for (const CurveSample& s : d.sample) max_k = std::max(max_k, s.size());
    BoostConfig bc;
    bc.kind = kind;
    bc.effects = simulation_effects(true);
    bc.iterations = 1000;
    bc.folds = 5;
    bc.seed = sc.seed;
    const PreparedData data = prepare(d.sample, d.table, bc);
    const CvResult cv = cv_early_stop(data);
    const FittedModel model = make_model(data, run_boosting(data, {}, {}, cv.m_stop));
    record("sparse", model);

    const std::vector<double> angles = batch_angles();
    Eigen::MatrixXd smooth(truth.space.m(), static_cast<Eigen::Index>(angles.size()));
    for (std::size_t a = 0; a < angles.size(); ++a) {
      smooth.col(static_cast<Eigen::Index>(a)) = truth.smooth_coef(angles[a]);
    }
    const Eigen::Index k = 200;
    Eigen::VectorXd grid(k);
    for (Eigen::Index j = 0; j < k; ++j) grid[j] = static_cast<double>(j) / k;
    const CurveCache ct = truth.space.cache(grid, InnerProduct::diagonal(uniform_weights(k)));
    const Eigen::Index na = smooth.cols();
    const Factorization true_smooth =
        factorize(smooth, ct.gram, Eigen::MatrixXd::Identity(na, na) / static_cast<double>(na));

    std::string line = std::string(to_string(kind)) + " max k " + std::to_string(max_k) +
                       " m_stop " + std::to_string(cv.m_stop);
    bool ok = max_k == 3;
    for (std::size_t j = 0; j < model.effects.size(); ++j) {
      const std::string& name = model.effects[j].basis.spec.name;
      if (is_nuisance(name)) continue;
      const Factorization f = factorize_effect(model, j);
      double corr = 0.0;
      if (f.components() > 0 && f.singular_values[0] > 0) {
        const Eigen::VectorXd ref =
            name == "binary" ? truth.contrast : true_smooth.directions.col(0).eval();
        corr = direction_correlation(model, f.directions.col(0), truth, ref);
      }
      ok = ok && corr >= 0.8;
      line += ", " + name + " correlation " + fmt("%.3f", corr);
    }
    o.pass = o.pass && ok;
    o.detail += (o.detail.empty() ? "" : "; ") + line;
  }
  o.detail += "; " + fmt("%.0f", seconds_since(t0)) + " s";
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::string detail;
  int selection_mismatch = 0;
  for (GeometryKind kind : kKinds) {
    Rng rng(kind == GeometryKind::Form ? 901 : 902);
    const Dataset d = make_dataset(rng, 14, 0.05);
    BoostConfig cfg = small_config(kind);
    cfg.effects = five_effects();
    cfg.eta = 0.3;
    const PreparedData data = prepare(d.sample, d.table, cfg);
    const BoostingRun run = run_boosting(data, {}, {}, 30);
    if (run.selection != exhaustive_refit_trace(data, 30)) ++selection_mismatch;

    cfg.iterations = 60;
    std::string dumps[2];
    for (std::string& text : dumps) {
      const PreparedData again = prepare(d.sample, d.table, cfg);
      const CvResult cv = cv_early_stop(again);
      const FittedModel model = make_model(again, run_boosting(again, {}, {}, cv.m_stop));
      record("determinism", model);
      text = dump_json(model_to_json(model));
    }
    if (dumps[0] != dumps[1]) {
      o.pass = false;
      detail += std::string(to_string(kind)) + " reruns differ; ";
    }
  }
  int not_lower = 0;
  for (const RiskRecord& r : g_runs) not_lower += !(r.stop < r.start);
  o.pass = o.pass && selection_mismatch == 0 && not_lower == 0;
  o.detail = detail + "risk decreased on " + std::to_string(g_runs.size() - not_lower) + "/" +
             std::to_string(g_runs.size()) + " runs, selection oracle mismatches " +
             std::to_string(selection_mismatch) + ", reruns byte-identical " +
             (detail.empty() ? "yes" : "no");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3,
                                                          criterion4, criterion5, criterion6,
                                                          criterion7, criterion8, criterion9};
  std::set<int> only;
  for (int a = 1; a < argc; ++a) only.insert(std::atoi(argv[a]));
  bool all = true;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    const int id = static_cast<int>(c) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[c]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("CRITERION %d %s: %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
