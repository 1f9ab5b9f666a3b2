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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "shapeboost/io.hpp"

#ifndef SHAPEBOOST_CLI
#error "SHAPEBOOST_CLI must name the command-line binary"
#endif

namespace fs = std::filesystem;
using namespace shapeboost;
using nlohmann::json;

namespace {

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "shapeboost_test_cli";
  fs::create_directories(dir);
  return dir;
}

std::string path(const std::string& name) { return (work_dir() / name).string(); }

std::string slurp(const std::string& file) {
  std::ifstream in(file);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const std::string& file, const std::string& text) { std::ofstream(file) << text; }

// Runs the CLI with `args`; stdout and stderr land in cli.out / cli.err.
int run(const std::string& args) {
  const std::string cmd = std::string("\"") + SHAPEBOOST_CLI + "\" " + args + " > \"" +
                          path("cli.out") + "\" 2> \"" + path("cli.err") + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void landmark_files() {
  spit(path("lm.csv"),
       "curve_id,index,re,im\n"
       "a,1,0,0\na,2,1,0\na,3,1.1,1\na,4,0,0.9\n"
       "b,1,0,0\nb,2,1.2,0.1\nb,3,1,1\nb,4,-0.1,1\n"
       "c,1,1,1\nc,2,2,1.1\nc,3,2,2.2\nc,4,0.9,2\n");
  spit(path("lm_cov.csv"), "curve_id,g\na,u\nb,v\nc,u\n");
  spit(path("lm.json"), R"({
    "geometry": "form",
    "response": {"knots": 3, "degree": 1, "cyclic": true, "knot_rule": "equidistant"},
    "weights": "uniform",
    "effects": [{"name": "g", "kind": "categorical", "covariates": ["g"], "df": 2}],
    "boosting": {"iterations": 5, "folds": 2, "seed": 4}
  })");
}

}  // namespace

TEST_CASE("fit writes a model that round-trips byte for byte") {
  landmark_files();
  const std::string fit = "fit --curves " + path("lm.csv") + " --covariates " + path("lm_cov.csv") +
                          " --config " + path("lm.json");
  REQUIRE(run(fit + " --out " + path("m1.json")) == 0);
  save_model(path("m1_again.json"), load_model(path("m1.json")));
  CHECK(slurp(path("m1.json")) == slurp(path("m1_again.json")));

  const json model = json::parse(slurp(path("m1.json")));
  CHECK(model["config_hash"] == config_hash(read_config_file(path("lm.json"))));
  CHECK(model["risk_trace"].size() == 6);

  // Same seed, same file.
  REQUIRE(run(fit + " --out " + path("m2.json")) == 0);
  CHECK(slurp(path("m1.json")) == slurp(path("m2.json")));
}

TEST_CASE("schema and geometry errors map to exit codes") {
  landmark_files();
  spit(path("nog.csv"), "curve_id,h\na,1\nb,2\nc,3\n");
  CHECK(run("fit --curves " + path("lm.csv") + " --covariates " + path("nog.csv") + " --config " +
            path("lm.json") + " --out " + path("x.json")) == 2);
  CHECK(slurp(path("cli.err")).find("'g'") != std::string::npos);

  spit(path("bad.json"), R"({"geometry": "form", "effects": [], "colour": 1})");
  CHECK(run("fit --curves " + path("lm.csv") + " --covariates " + path("lm_cov.csv") +
            " --config " + path("bad.json") + " --out " + path("x.json")) == 2);
  CHECK(slurp(path("cli.err")).find("colour") != std::string::npos);

  spit(path("flat.csv"),
       "curve_id,index,re,im\n"
       "a,1,0,0\na,2,1,0\na,3,1.1,1\na,4,0,0.9\n"
       "flat,1,2,2\nflat,2,2,2\nflat,3,2,2\nflat,4,2,2\n"
       "c,1,1,1\nc,2,2,1.1\nc,3,2,2.2\nc,4,0.9,2\n");
  spit(path("flat_cov.csv"), "curve_id,g\na,u\nflat,v\nc,u\n");
  CHECK(run("fit --curves " + path("flat.csv") + " --covariates " + path("flat_cov.csv") +
            " --config " + path("lm.json") + " --out " + path("x.json")) == 3);
  CHECK(slurp(path("cli.err")).find("'flat'") != std::string::npos);

  CHECK(run("fit --curves " + path("lm.csv")) == 2);
  CHECK(run("predict --model " + path("missing.json") + " --covariates " + path("lm_cov.csv") +
            " --out " + path("x.csv")) == 2);
}

TEST_CASE("factorizing a rank-one effect gives one component") {
  landmark_files();
  REQUIRE(run("fit --curves " + path("lm.csv") + " --covariates " + path("lm_cov.csv") +
              " --config " + path("lm.json") + " --out " + path("m1.json")) == 0);
  REQUIRE(run("factorize --model " + path("m1.json") + " --out " + path("rep.json") + " --svg " +
              path("plots")) == 0);
  const json rep = json::parse(slurp(path("rep.json")));
  REQUIRE(rep["effects"].size() == 1);
  const json& comps = rep["effects"][0]["components"];
  REQUIRE(comps.size() == 1);
  CHECK(comps[0]["share"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep["config_hash"] == json::parse(slurp(path("m1.json")))["config_hash"]);
  CHECK(fs::exists(work_dir() / "plots" / "g_component1.svg"));
  CHECK(fs::exists(work_dir() / "plots" / "g_scalar.svg"));
}

TEST_CASE("simulate, cv, fit, predict and eval pipeline") {
  const std::string dir = path("sim");
  REQUIRE(run("simulate --n 54 --kbar 40 --seed 2 --out-dir " + dir) == 0);
  for (const char* f : {"curves.csv", "covariates.csv", "config.json", "truth.json"}) {
    CHECK(fs::exists(fs::path(dir) / f));
  }
  const std::string data = " --curves " + dir + "/curves.csv --covariates " + dir + "/covariates.csv" +
                           " --config " + dir + "/config.json";

  REQUIRE(run("cv" + data + " --iterations 60 --folds 3 --out " + path("cv.csv") + " --model " +
              path("cvm.json")) == 0);
  const std::string cv_out = slurp(path("cli.out"));
  CHECK(cv_out.find("m_stop") != std::string::npos);
  const std::string cv_csv = slurp(path("cv.csv"));
  CHECK(cv_csv.rfind("# config_hash=", 0) == 0);
  CHECK(cv_csv.find("iteration,mean,fold1,fold2,fold3") != std::string::npos);
  REQUIRE(run("cv" + data + " --iterations 60 --folds 3 --out " + path("cv2.csv")) == 0);
  CHECK(slurp(path("cv2.csv")) == cv_csv);

  REQUIRE(run("fit" + data + " --iterations 150 --out " + path("sim_model.json")) == 0);
  REQUIRE(run("eval --model " + path("sim_model.json") + " --truth " + dir + "/truth.json --out " +
              path("rmse.csv")) == 0);
  std::istringstream table(slurp(path("rmse.csv")));
  std::string line;
  std::getline(table, line);
  CHECK(line.rfind("# config_hash=", 0) == 0);
  std::getline(table, line);
  CHECK(line == "effect,role,rmse,selected_fraction");
  int rows = 0;
  while (std::getline(table, line)) {
    ++rows;
    const double rmse = std::stod(line.substr(line.find(',', line.find(',') + 1) + 1));
    CHECK(rmse >= 0.0);
    if (line.rfind("smooth,", 0) == 0) CHECK(rmse < 0.5);
  }
  CHECK(rows == 5);

  // Predictions at the training rows reproduce the in-sample means: their
  // mean squared distance to the data is the final training risk.
  REQUIRE(run("predict --model " + path("sim_model.json") + " --covariates " + dir +
              "/covariates.csv --curves " + dir + "/curves.csv --out " + path("pred.csv")) == 0);
  const FittedModel model = load_model(path("sim_model.json"));
  const std::vector<CurveSample> obs = make_sample(read_curve_file(dir + "/curves.csv"), model.config);
  const std::vector<CurveSample> pred = make_sample(read_curve_file(path("pred.csv")), model.config);
  REQUIRE(pred.size() == obs.size());
  double risk = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    REQUIRE(pred[i].id == obs[i].id);
    risk += geodesic_dist(obs[i].values, pred[i].values, obs[i].weights, model.config.kind) *
            geodesic_dist(obs[i].values, pred[i].values, obs[i].weights, model.config.kind);
  }
  risk /= static_cast<double>(obs.size());
  CHECK(std::abs(risk - model.risk_trace.back()) <= 1e-12);
}
