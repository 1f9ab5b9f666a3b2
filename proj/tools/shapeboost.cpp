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

// Command-line front end: fit, cv, predict, factorize, simulate, eval.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "shapeboost/errors.hpp"
#include "shapeboost/factorize.hpp"
#include "shapeboost/io.hpp"
#include "shapeboost/simulate.hpp"
#include "shapeboost/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace shapeboost;

namespace {

enum Exit { kOk = 0, kFailure = 1, kSchema = 2, kGeometry = 3, kNumerical = 4 };

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("shapeboost");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("SHAPEBOOST_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept real names.
    if (level != spdlog::level::off || std::string(env) == "off") {
      spdlog::set_level(level);
    } else {
      spdlog::warn("ignoring unknown SHAPEBOOST_LOG level '{}'", env);
    }
  }
}

// Flags shared by the fitting commands; unset flags keep the config value.
struct Overrides {
  std::string geometry, weights;
  std::optional<double> eta;
  std::optional<int> iterations, folds;
  std::optional<std::uint64_t> seed;
  int threads = 0;

  void add_to(CLI::App* app, bool boosting) {
    app->add_option("--geometry", geometry, "shape or form")->check(CLI::IsMember({"shape", "form"}));
    app->add_option("--weights", weights, "trapezoid, uniform, column or gram")
        ->check(CLI::IsMember({"trapezoid", "uniform", "column", "gram"}));
    if (boosting) {
      app->add_option("--eta", eta, "step length in (0, 1]");
      app->add_option("--iterations", iterations, "boosting iterations");
      app->add_option("--folds", folds, "cross-validation folds");
    }
    app->add_option("--seed", seed, "random seed");
    app->add_option("--threads", threads, "worker threads (default: all cores)");
  }

  void apply(BoostConfig& c) const {
    if (!geometry.empty()) c.kind = parse_geometry(geometry);
    if (!weights.empty()) c.weights = parse_weight_rule(weights);
    if (eta) c.eta = *eta;
    if (iterations) c.iterations = *iterations;
    if (folds) c.folds = *folds;
    if (seed) c.seed = *seed;
    c.threads = thread_count();
    c.validate();
  }

  int thread_count() const {
    if (threads > 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
  }
};

struct Inputs {
  std::vector<CurveSample> sample;
  CovariateTable table;
};

Inputs load_inputs(const std::string& curves, const std::string& covariates, const BoostConfig& c) {
  Inputs in;
  in.sample = make_sample(read_curve_file(curves), c);
  std::vector<std::string> ids;
  for (const CurveSample& s : in.sample) ids.push_back(s.id);
  in.table = align_covariates(read_covariate_file(covariates), ids);
  return in;
}

std::string hash_comment(const std::string& hash) { return "# config_hash=" + hash + "\n"; }

std::string file_safe(const std::string& name) {
  std::string out = name;
  for (char& ch : out) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
  }
  return out;
}

// ---- fit / cv ----

struct FitArgs {
  std::string curves, covariates, config, out, model_out;
  Overrides over;
};

int cmd_fit(const FitArgs& a) {
  BoostConfig cfg = read_config_file(a.config);
  a.over.apply(cfg);
  const Inputs in = load_inputs(a.curves, a.covariates, cfg);
  FittedModel model = boost_fit(in.sample, in.table, cfg);
  model.config_hash = config_hash(cfg);
  save_model(a.out, model);
  spdlog::info("fitted {} iterations, risk {:.6e} -> {:.6e}", model.m_stop, model.risk_trace.front(),
               model.risk_trace.back());
  std::cout << "model " << a.out << " config_hash " << model.config_hash << "\n";
  return kOk;
}

int cmd_cv(const FitArgs& a) {
  BoostConfig cfg = read_config_file(a.config);
  a.over.apply(cfg);
  const Inputs in = load_inputs(a.curves, a.covariates, cfg);
  const PreparedData data = prepare(in.sample, in.table, cfg);
  const CvResult cv = cv_early_stop(data);
  const std::string hash = config_hash(cfg);
  std::ostringstream csv;
  csv << hash_comment(hash) << "iteration,mean";
  for (Eigen::Index f = 0; f < cv.fold_risk.rows(); ++f) csv << ",fold" << f + 1;
  csv << "\n";
  for (std::size_t it = 0; it < cv.mean_risk.size(); ++it) {
    csv << it << ',' << json(cv.mean_risk[it]).dump();
    for (Eigen::Index f = 0; f < cv.fold_risk.rows(); ++f) {
      csv << ',' << json(cv.fold_risk(f, static_cast<Eigen::Index>(it))).dump();
    }
    csv << "\n";
  }
  write_text_file(a.out, csv.str());
  std::cout << "m_stop " << cv.m_stop << " config_hash " << hash << "\n";
  if (!a.model_out.empty()) {
    FittedModel model = make_model(data, run_boosting(data, {}, {}, cv.m_stop));
    model.config_hash = hash;
    save_model(a.model_out, model);
  }
  return kOk;
}

// ---- predict ----

struct PredictArgs {
  std::string model, covariates, curves, out;
  int points = 100;
};

int cmd_predict(const PredictArgs& a) {
  const FittedModel model = load_model(a.model);
  const CovariateTable table = read_covariate_file(a.covariates);
  std::vector<CurveSample> grids;
  if (!a.curves.empty()) {
    const CurveFile file = read_curve_file(a.curves);
    const std::vector<CurveSample> all = make_sample(file, model.config);
    for (const std::string& id : table.ids) {
      const auto it = std::find_if(all.begin(), all.end(), [&](const CurveSample& s) { return s.id == id; });
      if (it == all.end()) throw InputError("curve '" + id + "' has no grid in " + a.curves);
      grids.push_back(*it);
    }
  } else {
    if (a.points < 3) throw InputError("--points must be at least 3");
    const bool cyclic = model.space.basis().config().cyclic;
    const Eigen::VectorXd grid =
        Eigen::VectorXd::LinSpaced(a.points, 0.0, cyclic ? 1.0 - 1.0 / a.points : 1.0);
    for (const std::string& id : table.ids) {
      grids.push_back({id, grid, {}, model_weights(model, grid)});
    }
  }
  std::vector<CurveSample> out;
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    CurveSample s = grids[static_cast<std::size_t>(i)];
    s.values = predict_mean(model, table, i, s.grid, s.weights);
    out.push_back(std::move(s));
  }
  std::ostringstream csv;
  csv << hash_comment(model.config_hash);
  write_curve_csv(csv, out);
  write_text_file(a.out, csv.str());
  return kOk;
}

// ---- factorize ----

struct FactorArgs {
  std::string model, out, svg, method = "cholesky", curves, covariates, effect;
  double tau = 0.0;
  bool predictor = false;
};

json factorization_json(const Factorization& f) {
  json comps = json::array();
  for (Eigen::Index r = 0; r < f.components(); ++r) {
    const double d = f.singular_values[r];
    json c = {{"index", r + 1},
              {"d", d},
              {"variance", d * d},
              {"share", f.total_variance > 0 ? d * d / f.total_variance : 0.0},
              {"direction", std::vector<double>(f.directions.col(r).data(),
                                                f.directions.col(r).data() + f.directions.rows())},
              {"scalar_coefs", std::vector<double>(f.scalar_coefs.col(r).data(),
                                                   f.scalar_coefs.col(r).data() + f.scalar_coefs.rows())}};
    if (f.effect_variance.size() > 0) {
      json ev = json::object();
      for (std::size_t e = 0; e < f.effect_names.size(); ++e) {
        ev[f.effect_names[e]] = f.effect_variance(static_cast<Eigen::Index>(e), r);
      }
      c["effect_variance"] = ev;
    }
    comps.push_back(c);
  }
  return {{"total_variance", f.total_variance}, {"components", comps}};
}

// Scalar effect curves h^(r)(x) of a single-covariate effect.
void write_scalar_plot(const FittedEffect& e, const Factorization& f, const CovariateTable* data,
                       const fs::path& path) {
  const CovariateBasis& b = e.basis;
  if (b.parent || b.marginals.size() > 1) {
    spdlog::info("no scalar plot for effect '{}' (nested or multi-covariate)", b.spec.name);
    return;
  }
  CovariateTable t;
  Eigen::VectorXd x;
  std::vector<std::string> ticks;
  std::string label = "constant";
  if (b.marginals.empty()) {
    x = Eigen::VectorXd::Zero(1);
    t.ids = {"x0"};
    ticks = {"all"};
  } else {
    const MarginalBasis& mb = b.marginals[0];
    label = mb.covariate;
    if (mb.factor) {
      ticks = mb.levels;
      x = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(ticks.size()), 0,
                                     static_cast<double>(ticks.size()) - 1);
      t.add_column(mb.covariate, ticks);
    } else {
      double lo = mb.center - 1.0, hi = mb.center + 1.0;
      if (mb.has_spline) {
        lo = mb.spline.lower();
        hi = mb.spline.upper();
      } else if (data && data->has(mb.covariate)) {
        const auto& z = data->numeric(mb.covariate);
        lo = *std::min_element(z.begin(), z.end());
        hi = *std::max_element(z.begin(), z.end());
      }
      x = Eigen::VectorXd::LinSpaced(50, lo, hi);
      t.add_numeric(mb.covariate, std::vector<double>(x.data(), x.data() + x.size()));
    }
    for (Eigen::Index i = 0; i < x.size(); ++i) t.ids.push_back("x" + std::to_string(i));
  }
  const Eigen::MatrixXd ys = b.design(t) * f.scalar_coefs;
  std::vector<std::string> series;
  for (Eigen::Index r = 0; r < ys.cols(); ++r) series.push_back("component " + std::to_string(r + 1));
  write_text_file(path.string(), scalar_effect_svg(x, ys, series, label,
                                                   "effect " + b.spec.name + ": scalar curves", ticks));
}

int cmd_factorize(const FactorArgs& a) {
  const FittedModel model = load_model(a.model);
  const FactorMethod method = parse_factor_method(a.method);
  std::optional<Inputs> in;
  if (!a.curves.empty() || !a.covariates.empty()) {
    if (a.curves.empty() || a.covariates.empty()) {
      throw InputError("--curves and --covariates go together");
    }
    in = load_inputs(a.curves, a.covariates, model.config);
  }
  if (method == FactorMethod::Qr && !in) throw InputError("the qr method needs --curves and --covariates");

  std::vector<std::size_t> chosen;
  for (std::size_t j = 0; j < model.effects.size(); ++j) {
    if (a.effect.empty() || model.effects[j].basis.spec.name == a.effect) chosen.push_back(j);
  }
  if (chosen.empty()) throw InputError("model has no effect '" + a.effect + "'");
  std::vector<Factorization> facts;
  for (std::size_t j : chosen) {
    facts.push_back(factorize_effect(model, j, method, in ? &in->sample : nullptr,
                                     in ? &in->table : nullptr));
  }
  const double tau = a.tau > 0.0 ? a.tau : default_tau(facts);
  json effects = json::array();
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    json e = factorization_json(facts[k]);
    e["name"] = model.effects[chosen[k]].basis.spec.name;
    effects.push_back(e);
  }
  json report = {{"config_hash", model.config_hash},
                 {"method", std::string(to_string(method))},
                 {"tau", tau},
                 {"effects", effects}};
  if (a.predictor) report["predictor"] = factorization_json(factorize_predictor(model));
  write_text_file(a.out, dump_json(report));

  if (!a.svg.empty()) {
    const fs::path dir(a.svg);
    fs::create_directories(dir);
    const bool closed = model.space.basis().config().cyclic;
    for (std::size_t k = 0; k < chosen.size(); ++k) {
      const FittedEffect& e = model.effects[chosen[k]];
      const Factorization& f = facts[k];
      const std::string base = file_safe(e.basis.spec.name);
      for (Eigen::Index r = 0; r < std::min<Eigen::Index>(f.components(), 3); ++r) {
        if (f.singular_values[r] <= 0.0) break;
        const DirectionVisual v = direction_visual(model.space, f.directions.col(r), tau);
        const double share = f.total_variance > 0 ? f.singular_values[r] * f.singular_values[r] / f.total_variance : 0;
        std::ostringstream title;
        title << "effect " << e.basis.spec.name << ", component " << r + 1 << " ("
              << std::lround(100 * share) << "% of variance), tau = " << tau;
        write_text_file((dir / (base + "_component" + std::to_string(r + 1) + ".svg")).string(),
                        direction_svg(v, title.str(), closed));
      }
      write_scalar_plot(e, f, in ? &in->table : nullptr, dir / (base + "_scalar.svg"));
    }
  }
  std::cout << "report " << a.out << " config_hash " << model.config_hash << "\n";
  return kOk;
}

// ---- simulate / eval ----

struct SimArgs {
  std::string geometry = "form", weights = "trapezoid", out_dir, pool, templ;
  std::int64_t n = 54;
  double kbar = 40.0, length_scale = 2.0;
  std::optional<double> ratio;
  std::uint64_t seed = 1;
  bool pre_aligned = false, no_nuisance = false;
};

json sim_params(const SimArgs& a) {
  json j = {{"geometry", a.geometry}, {"weights", a.weights}, {"n", a.n},
            {"mean_grid", a.kbar}, {"length_scale", a.length_scale}, {"seed", a.seed},
            {"pre_aligned", a.pre_aligned}, {"nuisance", !a.no_nuisance}};
  if (a.ratio) j["noise_to_signal"] = *a.ratio;
  if (!a.pool.empty()) j["pool"] = fs::absolute(a.pool).string();
  if (!a.templ.empty()) j["template"] = fs::absolute(a.templ).string();
  return j;
}

struct Simulation {
  TruthSpec truth;
  SimDataset data;
  bool nuisance = true;
};

Simulation run_simulation(const json& p) {
  Simulation s;
  const GeometryKind kind = parse_geometry(p.at("geometry").get<std::string>());
  BoostConfig reader;  // only used to map files onto grids
  reader.response.cyclic = true;
  std::vector<CurveSample> templ;
  if (p.contains("template")) templ = make_sample(read_curve_file(p.at("template")), reader);
  s.truth = gen_truth(kind, templ);
  SimConfig cfg;
  cfg.n = p.at("n").get<Eigen::Index>();
  cfg.mean_grid = p.at("mean_grid").get<double>();
  cfg.length_scale = p.at("length_scale").get<double>();
  cfg.seed = p.at("seed").get<std::uint64_t>();
  cfg.pre_aligned = p.at("pre_aligned").get<bool>();
  cfg.weights = parse_weight_rule(p.at("weights").get<std::string>());
  if (p.contains("noise_to_signal")) cfg.noise_to_signal = p.at("noise_to_signal").get<double>();
  if (p.contains("pool")) {
    cfg.noise = NoiseMode::ResamplePool;
    cfg.pool = make_sample(read_curve_file(p.at("pool")), reader);
  }
  s.nuisance = p.at("nuisance").get<bool>();
  s.data = gen_dataset(s.truth, cfg);
  return s;
}

int cmd_simulate(const SimArgs& a) {
  if (a.out_dir.empty()) throw InputError("--out-dir is required");
  const json params = sim_params(a);
  const Simulation sim = run_simulation(params);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);

  BoostConfig fit;
  fit.kind = sim.truth.space.kind();
  fit.weights = parse_weight_rule(a.weights);
  fit.effects = simulation_effects(sim.nuisance);
  fit.iterations = 1000;
  fit.seed = a.seed;
  const std::string hash = config_hash(fit);

  std::ostringstream curves, covs;
  curves << hash_comment(hash);
  write_curve_csv(curves, sim.data.sample);
  covs << hash_comment(hash);
  write_covariate_csv(covs, sim.data.table);
  write_text_file((dir / "curves.csv").string(), curves.str());
  write_text_file((dir / "covariates.csv").string(), covs.str());
  write_text_file((dir / "config.json").string(), dump_json(config_to_json(fit)));

  const TruthSpec& t = sim.truth;
  const auto vec = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  const auto mat = [](const Eigen::MatrixXd& m) {
    return json{{"rows", m.rows()}, {"cols", m.cols()},
                {"data", std::vector<double>(m.data(), m.data() + m.size())}};
  };
  const json truth = {
      {"config_hash", hash},
      {"simulation", params},
      {"projection_error", t.projection_error},
      {"noise_to_signal", sim.data.noise_to_signal},
      {"pole", {{"re", vec(t.space.pole().coef.real())}, {"im", vec(t.space.pole().coef.imag())}}},
      {"transform", mat(t.space.transform().z)},
      {"contrast", vec(t.contrast)},
      {"smooth", mat(t.smooth)},
      {"z_knots", vec(t.z_basis.interior_knots())}};
  write_text_file((dir / "truth.json").string(), dump_json(truth));
  std::cout << "simulated " << sim.data.sample.size() << " curves, noise-to-signal "
            << sim.data.noise_to_signal << ", config_hash " << hash << "\n";
  return kOk;
}

struct EvalArgs {
  std::string model, truth, out;
};

int cmd_eval(const EvalArgs& a) {
  const FittedModel model = load_model(a.model);
  const json truth = read_json_file(a.truth);
  if (!truth.contains("simulation")) throw InputError(a.truth + ": missing 'simulation'");
  const Simulation sim = run_simulation(truth.at("simulation"));
  if (sim.truth.space.kind() != model.config.kind) {
    throw InputError("model geometry differs from the simulation");
  }
  const std::vector<double> rmse = simulation_rmse(model, sim.truth, sim.data);
  std::vector<int> count(model.effects.size(), 0);
  for (int s : model.selection_trace) ++count[static_cast<std::size_t>(s)];
  const double iters = std::max<double>(1.0, static_cast<double>(model.selection_trace.size()));
  std::ostringstream csv;
  csv << hash_comment(model.config_hash) << "effect,role,rmse,selected_fraction\n";
  for (std::size_t j = 0; j < model.effects.size(); ++j) {
    const std::string& name = model.effects[j].basis.spec.name;
    const bool signal = std::find(sim.data.effect_names.begin(), sim.data.effect_names.end(), name) !=
                        sim.data.effect_names.end();
    csv << name << ',' << (signal ? "signal" : "nuisance") << ',' << json(rmse[j]).dump() << ','
        << json(count[j] / iters).dump() << "\n";
  }
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    write_text_file(a.out, csv.str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Riemannian L2-Boosting for planar shape and form regression"};
  app.require_subcommand(1);

  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand("fit", "fit an additive model and write a model file");
  fit->add_option("--curves", fit_args.curves, "curve CSV")->required();
  fit->add_option("--covariates", fit_args.covariates, "covariate CSV")->required();
  fit->add_option("--config", fit_args.config, "model config JSON")->required();
  fit->add_option("--out", fit_args.out, "model JSON to write")->required();
  fit_args.over.add_to(fit, true);

  FitArgs cv_args;
  CLI::App* cv = app.add_subcommand("cv", "curve-wise cross-validated early stopping");
  cv->add_option("--curves", cv_args.curves, "curve CSV")->required();
  cv->add_option("--covariates", cv_args.covariates, "covariate CSV")->required();
  cv->add_option("--config", cv_args.config, "model config JSON")->required();
  cv->add_option("--out", cv_args.out, "fold-risk CSV to write")->required();
  cv->add_option("--model", cv_args.model_out, "also write the model refit at m_stop");
  cv_args.over.add_to(cv, true);

  // predict, factorize and simulate run serially; --threads is accepted for
  // a uniform command line.
  int serial_threads = 1;

  PredictArgs pred_args;
  CLI::App* pred = app.add_subcommand("predict", "predicted mean shapes/forms per covariate row");
  pred->add_option("--model", pred_args.model, "model JSON")->required();
  pred->add_option("--covariates", pred_args.covariates, "covariate CSV")->required();
  pred->add_option("--curves", pred_args.curves, "curve CSV whose grids are used");
  pred->add_option("--points", pred_args.points, "grid size without --curves");
  pred->add_option("--out", pred_args.out, "curve CSV to write")->required();
  pred->add_option("--threads", serial_threads, "worker threads");

  FactorArgs fac_args;
  CLI::App* fac = app.add_subcommand("factorize", "tensor-product factorization report");
  fac->add_option("--model", fac_args.model, "model JSON")->required();
  fac->add_option("--out", fac_args.out, "report JSON to write")->required();
  fac->add_option("--effect", fac_args.effect, "only this effect");
  fac->add_option("--method", fac_args.method, "cholesky or qr")
      ->check(CLI::IsMember({"cholesky", "qr"}));
  fac->add_option("--curves", fac_args.curves, "training curves (qr method)");
  fac->add_option("--covariates", fac_args.covariates, "training covariates (qr method)");
  fac->add_flag("--predictor", fac_args.predictor, "also factorize the joint predictor");
  fac->add_option("--svg", fac_args.svg, "directory for SVG plots");
  fac->add_option("--tau", fac_args.tau, "plot scale (default: largest effect SD)");
  fac->add_option("--threads", serial_threads, "worker threads");

  SimArgs sim_args;
  CLI::App* sim = app.add_subcommand("simulate", "synthetic dataset with known truth");
  sim->add_option("--geometry", sim_args.geometry)->check(CLI::IsMember({"shape", "form"}));
  sim->add_option("--weights", sim_args.weights)
      ->check(CLI::IsMember({"trapezoid", "uniform", "column"}));
  sim->add_option("--n", sim_args.n, "number of curves (multiple of 18)");
  sim->add_option("--kbar", sim_args.kbar, "mean evaluations per curve");
  sim->add_option("--noise-ratio", sim_args.ratio, "noise-to-signal variance ratio");
  sim->add_option("--length-scale", sim_args.length_scale, "noise correlation length");
  sim->add_option("--pool", sim_args.pool, "residual pool CSV at the true pole");
  sim->add_option("--template", sim_args.templ, "curve CSV whose mean becomes the pole");
  sim->add_option("--seed", sim_args.seed);
  sim->add_flag("--pre-aligned", sim_args.pre_aligned, "skip random frames");
  sim->add_flag("--no-nuisance", sim_args.no_nuisance, "config without nuisance effects");
  sim->add_option("--out-dir", sim_args.out_dir, "output directory")->required();
  sim->add_option("--threads", serial_threads, "worker threads");

  EvalArgs eval_args;
  CLI::App* ev = app.add_subcommand("eval", "rMSE of a fitted model against a simulated truth");
  ev->add_option("--model", eval_args.model, "model JSON")->required();
  ev->add_option("--truth", eval_args.truth, "truth.json from simulate")->required();
  ev->add_option("--out", eval_args.out, "CSV to write (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kSchema;
  }

  try {
    if (*fit) return cmd_fit(fit_args);
    if (*cv) return cmd_cv(cv_args);
    if (*pred) return cmd_predict(pred_args);
    if (*fac) return cmd_factorize(fac_args);
    if (*sim) return cmd_simulate(sim_args);
    if (*ev) return cmd_eval(eval_args);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSchema;
  } catch (const GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << "\n";
    return kGeometry;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSchema;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
