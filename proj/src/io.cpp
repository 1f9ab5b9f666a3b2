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

#include "shapeboost/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "shapeboost/errors.hpp"

namespace shapeboost {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Splits one CSV line; double quotes protect commas, "" is a literal quote.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool to_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = b + s.size();
  if (*b == '+') ++b;
  const auto res = std::from_chars(b, e, v);
  return res.ec == std::errc() && res.ptr == e && std::isfinite(v);
}

// Blank lines and lines starting with '#' carry no data.
bool skip_line(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t[0] == '#';
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  return out;
}

// ---- JSON helpers ----

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw InputError(where + ": unknown key '" + key + "'");
    }
  }
}

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw InputError(where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(where + ": key '" + key + "' has the wrong type");
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

json matrix_json(const Eigen::MatrixXd& m) {
  std::vector<double> data(m.data(), m.data() + m.size());
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXd matrix_from(const json& j, const std::string& where) {
  check_keys(j, {"rows", "cols", "data"}, where);
  const auto rows = get<Eigen::Index>(j, "rows", where);
  const auto cols = get<Eigen::Index>(j, "cols", where);
  const auto data = get<std::vector<double>>(j, "data", where);
  if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw InputError(where + ": matrix size does not match its data");
  }
  return Eigen::Map<const Eigen::MatrixXd>(data.data(), rows, cols);
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from(const json& j, const char* key, const std::string& where) {
  const auto data = get<std::vector<double>>(j, key, where);
  return Eigen::Map<const Eigen::VectorXd>(data.data(), static_cast<Eigen::Index>(data.size()));
}

json complex_json(const Eigen::VectorXcd& v) {
  return {{"re", vector_json(v.real())}, {"im", vector_json(v.imag())}};
}

Eigen::VectorXcd complex_from(const json& j, const std::string& where) {
  check_keys(j, {"re", "im"}, where);
  const Eigen::VectorXd re = vector_from(j, "re", where);
  const Eigen::VectorXd im = vector_from(j, "im", where);
  if (re.size() != im.size()) throw InputError(where + ": re and im differ in length");
  Eigen::VectorXcd out(re.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

json spline_json(const SplineConfig& s) {
  return {{"degree", s.degree},
          {"knots", s.n_knots},
          {"cyclic", s.cyclic},
          {"knot_rule", std::string(to_string(s.knot_rule))}};
}

SplineConfig spline_from(const json& j, const SplineConfig& fallback, const std::string& where) {
  check_keys(j, {"degree", "knots", "cyclic", "knot_rule"}, where);
  SplineConfig s = fallback;
  s.degree = get_or<int>(j, "degree", s.degree, where);
  s.n_knots = get_or<int>(j, "knots", s.n_knots, where);
  s.cyclic = get_or<bool>(j, "cyclic", s.cyclic, where);
  if (j.contains("knot_rule")) s.knot_rule = parse_knot_rule(get<std::string>(j, "knot_rule", where));
  if (s.degree < 1 || s.n_knots < 0) throw InputError(where + ": invalid spline degree or knot count");
  return s;
}

json basis_json(const BSplineBasis& b) {
  return {{"config", spline_json(b.config())},
          {"interior", vector_json(b.interior_knots())},
          {"lower", b.lower()},
          {"upper", b.upper()}};
}

BSplineBasis basis_from(const json& j, const std::string& where) {
  check_keys(j, {"config", "interior", "lower", "upper"}, where);
  return BSplineBasis::from_knots(spline_from(get<json>(j, "config", where), {}, where + ".config"),
                                  vector_from(j, "interior", where),
                                  get<double>(j, "lower", where), get<double>(j, "upper", where));
}

json effect_spec_json(const EffectSpec& e) {
  json j = {{"name", e.name},
            {"kind", std::string(to_string(e.kind))},
            {"covariates", e.covariates},
            {"basis", spline_json(e.basis)},
            {"df", e.df}};
  if (e.penalty) j["penalty"] = std::string(to_string(*e.penalty));
  if (e.centering) j["centering"] = std::string(to_string(*e.centering));
  if (!e.nested_in.empty()) j["nested_in"] = e.nested_in;
  return j;
}

EffectSpec effect_spec_from(const json& j, const std::string& where) {
  check_keys(j, {"name", "kind", "covariates", "basis", "df", "penalty", "centering", "nested_in"},
             where);
  EffectSpec e;
  e.name = get<std::string>(j, "name", where);
  const std::string at = where + " '" + e.name + "'";
  e.kind = parse_effect_kind(get<std::string>(j, "kind", at));
  e.covariates = get_or<std::vector<std::string>>(j, "covariates", {}, at);
  if (j.contains("basis")) e.basis = spline_from(j.at("basis"), e.basis, at + ".basis");
  e.df = get_or<double>(j, "df", e.df, at);
  if (j.contains("penalty")) e.penalty = parse_penalty(get<std::string>(j, "penalty", at));
  if (j.contains("centering")) e.centering = parse_centering(get<std::string>(j, "centering", at));
  e.nested_in = get_or<std::string>(j, "nested_in", "", at);
  return e;
}

}  // namespace

// ---- curves ----

CurveFile parse_curve_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (!skip_line(line)) header = split_csv(line);
  }
  if (header.empty()) throw InputError(source + ": empty curve file");
  CurveFile file;
  if (header.size() < 4 || header[0] != "curve_id" || (header[1] != "t" && header[1] != "index") ||
      header[2] != "re" || header[3] != "im" || header.size() > 5 ||
      (header.size() == 5 && header[4] != "w")) {
    throw InputError(source + ": curve header must be curve_id,t,re,im or curve_id,index,re,im "
                              "with an optional w column");
  }
  file.landmark = header[1] == "index";
  file.has_weights = header.size() == 5;

  struct Rows {
    std::vector<double> t, re, im, w;
  };
  std::map<std::string, std::size_t> slot;
  std::vector<std::string> order;
  std::vector<Rows> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const std::vector<std::string> f = split_csv(line);
    const std::string where = source + ":" + std::to_string(line_no);
    if (f.size() != header.size()) {
      throw InputError(where + ": expected " + std::to_string(header.size()) + " fields");
    }
    if (f[0].empty()) throw InputError(where + ": empty curve_id");
    double v[4] = {0, 0, 0, 1};
    for (std::size_t c = 1; c < f.size(); ++c) {
      if (!to_double(f[c], v[c - 1])) {
        throw InputError(where + ": column '" + header[c] + "' of curve '" + f[0] +
                         "' is not a finite number");
      }
    }
    auto [it, fresh] = slot.try_emplace(f[0], rows.size());
    if (fresh) {
      rows.emplace_back();
      order.push_back(f[0]);
    }
    Rows& r = rows[it->second];
    r.t.push_back(v[0]);
    r.re.push_back(v[1]);
    r.im.push_back(v[2]);
    r.w.push_back(v[3]);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Rows& r = rows[i];
    CurveRecord rec;
    rec.id = order[i];
    const auto k = static_cast<Eigen::Index>(r.t.size());
    if (k < 3) throw InputError(source + ": curve '" + rec.id + "' has fewer than 3 points");
    rec.t = Eigen::Map<const Eigen::VectorXd>(r.t.data(), k);
    rec.values.resize(k);
    for (Eigen::Index j = 0; j < k; ++j) rec.values[j] = Complex(r.re[j], r.im[j]);
    for (Eigen::Index j = 1; j < k; ++j) {
      if (!(rec.t[j] > rec.t[j - 1])) {
        throw InputError(source + ": '" + header[1] + "' is not strictly increasing in curve '" +
                         rec.id + "'");
      }
    }
    if (file.landmark) {
      for (Eigen::Index j = 0; j < k; ++j) {
        if (rec.t[j] < 1 || rec.t[j] != std::floor(rec.t[j])) {
          throw InputError(source + ": landmark indices of curve '" + rec.id +
                           "' must be integers >= 1");
        }
      }
    } else if (rec.t[0] < 0.0 || rec.t[k - 1] > 1.0) {
      throw InputError(source + ": t of curve '" + rec.id + "' leaves [0, 1]");
    }
    if (file.has_weights) {
      rec.w = Eigen::Map<const Eigen::VectorXd>(r.w.data(), k);
      if ((rec.w.array() <= 0.0).any()) {
        throw InputError(source + ": weights of curve '" + rec.id + "' must be positive");
      }
    }
    file.curves.push_back(std::move(rec));
  }
  if (file.curves.empty()) throw InputError(source + ": no curves");
  return file;
}

CurveFile read_curve_file(const std::string& path) {
  std::ifstream in = open_in(path);
  return parse_curve_csv(in, path);
}

InnerProduct rule_weights(const BoostConfig& config, const Eigen::VectorXd& grid,
                          const Eigen::VectorXd& column, const std::string& id) {
  switch (config.weights) {
    case WeightRule::Uniform:
      return InnerProduct::diagonal(uniform_weights(grid.size()));
    case WeightRule::Column:
      if (column.size() != grid.size()) {
        throw InputError("column weights need a w column (curve '" + id + "')");
      }
      return InnerProduct::diagonal(column);
    case WeightRule::Gram: {
      if (!config.gram_basis) throw InputError("gram weights need a gram_basis");
      const BSplineBasis b = BSplineBasis::build(*config.gram_basis, {}, 0.0, 1.0);
      if (b.dim() != grid.size()) {
        throw InputError("gram basis has " + std::to_string(b.dim()) + " functions but curve '" +
                         id + "' has " + std::to_string(grid.size()) + " coefficients");
      }
      return InnerProduct::full(b.gram());
    }
    case WeightRule::Trapezoid:
      break;
  }
  return InnerProduct::diagonal(trapezoid_weights(grid));
}

std::vector<CurveSample> make_sample(const CurveFile& file, const BoostConfig& config) {
  double top = 1.0;
  if (file.landmark) {
    for (const CurveRecord& r : file.curves) top = std::max(top, r.t.maxCoeff());
  }
  // Cyclic landmarks wrap, so index K + 1 coincides with index 1.
  const double span = config.response.cyclic ? top : std::max(1.0, top - 1.0);
  std::vector<CurveSample> out;
  out.reserve(file.curves.size());
  for (const CurveRecord& r : file.curves) {
    CurveSample s;
    s.id = r.id;
    s.grid = file.landmark ? Eigen::VectorXd((r.t.array() - 1.0) / span) : r.t;
    s.values = r.values;
    s.weights = rule_weights(config, s.grid, r.w, r.id);
    out.push_back(std::move(s));
  }
  return out;
}

void write_curve_csv(std::ostream& out, const std::vector<CurveSample>& curves) {
  out << "curve_id,t,re,im\n";
  for (const CurveSample& s : curves) {
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      out << csv_field(s.id) << ',' << fmt_double(s.grid[j]) << ',' << fmt_double(s.values[j].real())
          << ',' << fmt_double(s.values[j].imag()) << '\n';
    }
  }
}

void write_curve_file(const std::string& path, const std::vector<CurveSample>& curves) {
  std::ofstream out = open_out(path);
  write_curve_csv(out, curves);
}

// ---- covariates ----

CovariateTable parse_covariate_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (!skip_line(line)) header = split_csv(line);
  }
  if (header.empty() || header[0] != "curve_id") {
    throw InputError(source + ": covariate header must start with curve_id");
  }
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].empty()) throw InputError(source + ": empty column name");
    for (std::size_t d = 1; d < c; ++d) {
      if (header[d] == header[c]) throw InputError(source + ": duplicate column '" + header[c] + "'");
    }
  }
  std::vector<std::vector<std::string>> cols(header.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != header.size()) {
      throw InputError(source + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields");
    }
    for (std::size_t c = 0; c < f.size(); ++c) cols[c].push_back(f[c]);
  }
  CovariateTable t;
  t.ids = cols[0];
  std::vector<std::string> seen = t.ids;
  std::sort(seen.begin(), seen.end());
  const auto dup = std::adjacent_find(seen.begin(), seen.end());
  if (dup != seen.end()) throw InputError(source + ": curve '" + *dup + "' appears more than once");
  for (std::size_t c = 1; c < header.size(); ++c) t.add_column(header[c], std::move(cols[c]));
  return t;
}

CovariateTable read_covariate_file(const std::string& path) {
  std::ifstream in = open_in(path);
  return parse_covariate_csv(in, path);
}

void write_covariate_csv(std::ostream& out, const CovariateTable& table) {
  const std::vector<std::string> names = table.names();
  out << "curve_id";
  for (const std::string& n : names) out << ',' << csv_field(n);
  out << '\n';
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    out << csv_field(table.ids[static_cast<std::size_t>(i)]);
    for (const std::string& n : names) {
      if (table.is_numeric(n)) {
        out << ',' << fmt_double(table.numeric(n)[static_cast<std::size_t>(i)]);
      } else {
        out << ',' << csv_field(table.raw(n)[static_cast<std::size_t>(i)]);
      }
    }
    out << '\n';
  }
}

void write_covariate_file(const std::string& path, const CovariateTable& table) {
  std::ofstream out = open_out(path);
  write_covariate_csv(out, table);
}

CovariateTable align_covariates(const CovariateTable& table, const std::vector<std::string>& ids) {
  std::map<std::string, Eigen::Index> row;
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    if (!row.emplace(table.ids[static_cast<std::size_t>(i)], i).second) {
      throw InputError("curve '" + table.ids[static_cast<std::size_t>(i)] +
                       "' appears more than once in the covariates");
    }
  }
  std::vector<Eigen::Index> rows;
  rows.reserve(ids.size());
  for (const std::string& id : ids) {
    const auto it = row.find(id);
    if (it == row.end()) throw InputError("curve '" + id + "' has no covariate row");
    rows.push_back(it->second);
  }
  return table.subset(rows);
}

// ---- config ----

json config_to_json(const BoostConfig& c) {
  json effects = json::array();
  for (const EffectSpec& e : c.effects) effects.push_back(effect_spec_json(e));
  json response = spline_json(c.response);
  response["penalty"] = std::string(to_string(c.response_penalty));
  json j = {{"geometry", std::string(to_string(c.kind))},
            {"response", response},
            {"weights", std::string(to_string(c.weights))},
            {"effects", effects},
            {"boosting",
             {{"eta", c.eta}, {"iterations", c.iterations}, {"folds", c.folds}, {"seed", c.seed}}},
            {"pole",
             {{"align_rounds", c.pole.align_rounds},
              {"smoothing", c.pole.smoothing},
              {"max_iterations", c.pole.max_iterations},
              {"max_rounds", c.pole.max_rounds},
              {"stationarity", c.pole.stationarity},
              {"relative_change", c.pole.relative_change}}}};
  if (c.gram_basis) j["gram_basis"] = spline_json(*c.gram_basis);
  return j;
}

BoostConfig config_from_json(const json& j) {
  const std::string root = "config";
  check_keys(j, {"geometry", "response", "weights", "gram_basis", "effects", "boosting", "pole"},
             root);
  BoostConfig c;
  try {
    c.kind = parse_geometry(get<std::string>(j, "geometry", root));
    if (j.contains("response")) {
      json r = j.at("response");
      if (r.is_object() && r.contains("penalty")) {
        c.response_penalty = parse_penalty(get<std::string>(r, "penalty", root + ".response"));
        r.erase("penalty");
      }
      c.response = spline_from(r, c.response, root + ".response");
    }
    if (j.contains("weights")) c.weights = parse_weight_rule(get<std::string>(j, "weights", root));
    if (j.contains("gram_basis")) {
      c.gram_basis = spline_from(j.at("gram_basis"), SplineConfig{}, root + ".gram_basis");
    }
    const json effects = get<json>(j, "effects", root);
    if (!effects.is_array()) throw InputError(root + ": effects must be an array");
    for (std::size_t e = 0; e < effects.size(); ++e) {
      c.effects.push_back(effect_spec_from(effects[e], root + ".effects[" + std::to_string(e) + "]"));
    }
    if (j.contains("boosting")) {
      const json& b = j.at("boosting");
      const std::string at = root + ".boosting";
      check_keys(b, {"eta", "iterations", "folds", "seed"}, at);
      c.eta = get_or<double>(b, "eta", c.eta, at);
      c.iterations = get_or<int>(b, "iterations", c.iterations, at);
      c.folds = get_or<int>(b, "folds", c.folds, at);
      c.seed = get_or<std::uint64_t>(b, "seed", c.seed, at);
    }
    if (j.contains("pole")) {
      const json& p = j.at("pole");
      const std::string at = root + ".pole";
      check_keys(p, {"align_rounds", "smoothing", "max_iterations", "max_rounds", "stationarity",
                     "relative_change"},
                 at);
      c.pole.align_rounds = get_or<int>(p, "align_rounds", c.pole.align_rounds, at);
      c.pole.smoothing = get_or<double>(p, "smoothing", c.pole.smoothing, at);
      c.pole.max_iterations = get_or<int>(p, "max_iterations", c.pole.max_iterations, at);
      c.pole.max_rounds = get_or<int>(p, "max_rounds", c.pole.max_rounds, at);
      c.pole.stationarity = get_or<double>(p, "stationarity", c.pole.stationarity, at);
      c.pole.relative_change = get_or<double>(p, "relative_change", c.pole.relative_change, at);
    }
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

BoostConfig read_config_file(const std::string& path) { return config_from_json(read_json_file(path)); }

std::string config_hash(const BoostConfig& config) {
  const std::string text = config_to_json(config).dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---- models ----

json model_to_json(const FittedModel& m) {
  json effects = json::array();
  for (const FittedEffect& e : m.effects) {
    json marginals = json::array();
    for (const MarginalBasis& mb : e.basis.marginals) {
      json jm = {{"covariate", mb.covariate},
                 {"factor", mb.factor},
                 {"levels", mb.levels},
                 {"center", mb.center}};
      if (mb.has_spline) jm["spline"] = basis_json(mb.spline);
      marginals.push_back(jm);
    }
    effects.push_back({{"spec", effect_spec_json(e.basis.spec)},
                       {"marginals", marginals},
                       {"transform", matrix_json(e.basis.transform)},
                       {"penalty", matrix_json(e.basis.penalty)},
                       {"parent_coef", matrix_json(e.basis.parent_coef)},
                       {"theta", matrix_json(e.theta)},
                       {"lambda", e.lambda},
                       {"df", e.df},
                       {"df_clamped", e.df_clamped}});
  }
  return {{"format", "shapeboost-model"},
          {"version", 1},
          {"config_hash", m.config_hash},
          {"seed", m.config.seed},
          {"config", config_to_json(m.config)},
          {"response_basis", basis_json(m.space.basis())},
          {"pole", complex_json(m.space.pole().coef)},
          {"transform", matrix_json(m.space.transform().z)},
          {"effects", effects},
          {"risk_trace", m.risk_trace},
          {"selection_trace", m.selection_trace},
          {"m_stop", m.m_stop},
          {"g0", matrix_json(m.g0)},
          {"covariate_gram", matrix_json(m.covariate_gram)},
          {"gram_weights", matrix_json(m.gram_weights)}};
}

FittedModel model_from_json(const json& j) {
  const std::string root = "model";
  check_keys(j, {"format", "version", "config_hash", "seed", "config", "response_basis", "pole",
                 "transform", "effects", "risk_trace", "selection_trace", "m_stop", "g0",
                 "covariate_gram", "gram_weights"},
             root);
  if (get<std::string>(j, "format", root) != "shapeboost-model" || get<int>(j, "version", root) != 1) {
    throw InputError(root + ": not a version 1 shapeboost model");
  }
  FittedModel m;
  try {
    m.config = config_from_json(get<json>(j, "config", root));
    m.config_hash = get<std::string>(j, "config_hash", root);
    if (get<std::uint64_t>(j, "seed", root) != m.config.seed) {
      throw InputError(root + ": seed does not match the config");
    }
    PoleCoef pole{complex_from(get<json>(j, "pole", root), root + ".pole")};
    TangentTransform z{matrix_from(get<json>(j, "transform", root), root + ".transform")};
    m.space = ResponseSpace(m.config.kind, basis_from(get<json>(j, "response_basis", root), root),
                            m.config.response_penalty, std::move(pole), std::move(z));
    if (m.space.pole().coef.size() != m.space.basis().dim()) {
      throw InputError(root + ": pole does not match the response basis");
    }
    const json effects = get<json>(j, "effects", root);
    if (!effects.is_array()) throw InputError(root + ": effects must be an array");
    std::map<std::string, std::size_t> by_name;
    for (std::size_t k = 0; k < effects.size(); ++k) {
      const json& je = effects[k];
      const std::string at = root + ".effects[" + std::to_string(k) + "]";
      check_keys(je, {"spec", "marginals", "transform", "penalty", "parent_coef", "theta", "lambda",
                      "df", "df_clamped"},
                 at);
      FittedEffect e;
      e.basis.spec = effect_spec_from(get<json>(je, "spec", at), at + ".spec");
      for (const json& jm : get<json>(je, "marginals", at)) {
        check_keys(jm, {"covariate", "factor", "levels", "center", "spline"}, at + ".marginals");
        MarginalBasis mb;
        mb.covariate = get<std::string>(jm, "covariate", at);
        mb.factor = get<bool>(jm, "factor", at);
        mb.levels = get<std::vector<std::string>>(jm, "levels", at);
        mb.center = get<double>(jm, "center", at);
        mb.has_spline = jm.contains("spline");
        if (mb.has_spline) mb.spline = basis_from(jm.at("spline"), at + ".spline");
        e.basis.marginals.push_back(std::move(mb));
      }
      e.basis.transform = matrix_from(get<json>(je, "transform", at), at + ".transform");
      e.basis.penalty = matrix_from(get<json>(je, "penalty", at), at + ".penalty");
      e.basis.parent_coef = matrix_from(get<json>(je, "parent_coef", at), at + ".parent_coef");
      if (!e.basis.spec.nested_in.empty()) {
        const auto it = by_name.find(e.basis.spec.nested_in);
        if (it == by_name.end()) throw InputError(at + ": unknown parent effect");
        e.basis.parent = std::make_shared<const CovariateBasis>(m.effects[it->second].basis);
      }
      e.theta = matrix_from(get<json>(je, "theta", at), at + ".theta");
      if (e.theta.rows() != m.space.m() || e.theta.cols() != e.basis.dim()) {
        throw InputError(at + ": coefficient matrix has the wrong shape");
      }
      e.lambda = get<double>(je, "lambda", at);
      e.df = get<double>(je, "df", at);
      e.df_clamped = get<bool>(je, "df_clamped", at);
      by_name[e.basis.spec.name] = m.effects.size();
      m.effects.push_back(std::move(e));
    }
    m.risk_trace = get<std::vector<double>>(j, "risk_trace", root);
    m.selection_trace = get<std::vector<int>>(j, "selection_trace", root);
    m.m_stop = get<int>(j, "m_stop", root);
    m.g0 = matrix_from(get<json>(j, "g0", root), root + ".g0");
    m.covariate_gram = matrix_from(get<json>(j, "covariate_gram", root), root + ".covariate_gram");
    m.gram_weights = matrix_from(get<json>(j, "gram_weights", root), root + ".gram_weights");
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(root + ": " + e.what());
  }
  return m;
}

void save_model(const std::string& path, const FittedModel& model) {
  write_text_file(path, dump_json(model_to_json(model)));
}

FittedModel load_model(const std::string& path) { return model_from_json(read_json_file(path)); }

json read_json_file(const std::string& path) {
  std::ifstream in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": invalid JSON: " + e.what());
  }
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out = open_out(path);
  out << text;
  if (!out) throw InputError("failed writing '" + path + "'");
}

}  // namespace shapeboost
