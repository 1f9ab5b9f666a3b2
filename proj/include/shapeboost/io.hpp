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

// File formats: long CSV curve files, covariate CSV files, JSON configs and
// JSON model files.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "shapeboost/boost.hpp"
#include "shapeboost/covariates.hpp"

namespace shapeboost {

struct CurveRecord {
  std::string id;
  Eigen::VectorXd t;  // parameter values, or landmark indices in landmark mode
  Eigen::VectorXcd values;
  Eigen::VectorXd w;  // empty unless the file has a w column
};

/// Curve file with header curve_id,t,re,im or curve_id,index,re,im and an
/// optional trailing w column. Curves keep their order of first appearance.
/// Lines starting with '#' are comments in both CSV formats.
struct CurveFile {
  bool landmark = false;
  bool has_weights = false;
  std::vector<CurveRecord> curves;
};

CurveFile parse_curve_csv(std::istream& in, const std::string& source);
CurveFile read_curve_file(const std::string& path);

/// Samples with landmark indices mapped to [0, 1] and weights set by the
/// configured rule.
std::vector<CurveSample> make_sample(const CurveFile& file, const BoostConfig& config);

/// Inner product for one curve under `config.weights`; `column` is the w
/// column of the curve file (may be empty for other rules).
InnerProduct rule_weights(const BoostConfig& config, const Eigen::VectorXd& grid,
                          const Eigen::VectorXd& column, const std::string& id);

void write_curve_csv(std::ostream& out, const std::vector<CurveSample>& curves);
void write_curve_file(const std::string& path, const std::vector<CurveSample>& curves);

CovariateTable parse_covariate_csv(std::istream& in, const std::string& source);
CovariateTable read_covariate_file(const std::string& path);
void write_covariate_csv(std::ostream& out, const CovariateTable& table);
void write_covariate_file(const std::string& path, const CovariateTable& table);

/// Rows of `table` reordered to `ids`. Every id must appear exactly once.
CovariateTable align_covariates(const CovariateTable& table, const std::vector<std::string>& ids);

nlohmann::json config_to_json(const BoostConfig& config);
/// Throws InputError on unknown keys, wrong types or invalid values.
BoostConfig config_from_json(const nlohmann::json& j);
BoostConfig read_config_file(const std::string& path);

/// 64-bit FNV-1a of the canonical config JSON, as 16 hex digits. Thread
/// count is not part of the config.
std::string config_hash(const BoostConfig& config);

nlohmann::json model_to_json(const FittedModel& model);
FittedModel model_from_json(const nlohmann::json& j);
void save_model(const std::string& path, const FittedModel& model);
FittedModel load_model(const std::string& path);

nlohmann::json read_json_file(const std::string& path);
/// Two-space indented dump with a trailing newline.
std::string dump_json(const nlohmann::json& j);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace shapeboost
