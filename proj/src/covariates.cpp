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

#include "shapeboost/covariates.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "shapeboost/basis.hpp"
#include "shapeboost/errors.hpp"
#include "shapeboost/linalg.hpp"

namespace shapeboost {

namespace {

bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  if (first == last) return false;
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

}  // namespace

void CovariateTable::add_numeric(std::string name, const std::vector<double>& values) {
  Column c;
  c.name = std::move(name);
  c.numeric = true;
  c.num = values;
  c.raw.reserve(values.size());
  for (double v : values) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    c.raw.emplace_back(buf, res.ptr);
  }
  cols_.push_back(std::move(c));
}

void CovariateTable::add_column(std::string name, std::vector<std::string> raw) {
  Column c;
  c.name = std::move(name);
  c.numeric = true;
  c.num.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!parse_double(raw[i], c.num[i])) {
      c.numeric = false;
      break;
    }
  }
  if (!c.numeric) c.num.clear();
  c.raw = std::move(raw);
  cols_.push_back(std::move(c));
}

bool CovariateTable::has(std::string_view name) const {
  return std::any_of(cols_.begin(), cols_.end(), [&](const Column& c) { return c.name == name; });
}

const CovariateTable::Column& CovariateTable::column(std::string_view name) const {
  for (const Column& c : cols_) {
    if (c.name == name) return c;
  }
  throw InputError("missing covariate column '" + std::string(name) + "'");
}

bool CovariateTable::is_numeric(std::string_view name) const { return column(name).numeric; }

const std::vector<double>& CovariateTable::numeric(std::string_view name) const {
  const Column& c = column(name);
  if (!c.numeric) throw InputError("covariate column '" + c.name + "' is not numeric");
  return c.num;
}

const std::vector<std::string>& CovariateTable::raw(std::string_view name) const {
  return column(name).raw;
}

std::vector<std::string> CovariateTable::names() const {
  std::vector<std::string> out;
  for (const Column& c : cols_) out.push_back(c.name);
  return out;
}

CovariateTable CovariateTable::subset(const std::vector<Eigen::Index>& rows) const {
  CovariateTable out;
  for (Eigen::Index r : rows) out.ids.push_back(ids.at(r));
  for (const Column& c : cols_) {
    Column s;
    s.name = c.name;
    s.numeric = c.numeric;
    for (Eigen::Index r : rows) {
      s.raw.push_back(c.raw.at(r));
      if (c.numeric) s.num.push_back(c.num.at(r));
    }
    out.cols_.push_back(std::move(s));
  }
  return out;
}

std::string_view to_string(EffectKind kind) {
  switch (kind) {
    case EffectKind::Constant:
      return "constant";
    case EffectKind::Linear:
      return "linear";
    case EffectKind::Categorical:
      return "categorical";
    case EffectKind::Smooth:
      return "smooth";
    case EffectKind::SmoothInteraction:
      return "smooth_interaction";
  }
  return "constant";
}

EffectKind parse_effect_kind(std::string_view name) {
  for (EffectKind k : {EffectKind::Constant, EffectKind::Linear, EffectKind::Categorical,
                       EffectKind::Smooth, EffectKind::SmoothInteraction}) {
    if (to_string(k) == name) return k;
  }
  throw InputError("unknown effect kind '" + std::string(name) + "'");
}

std::string_view to_string(Centering c) {
  switch (c) {
    case Centering::None:
      return "none";
    case Centering::SumToZero:
      return "sum_to_zero";
    case Centering::AroundMarginals:
      return "around_marginals";
  }
  return "none";
}

Centering parse_centering(std::string_view name) {
  for (Centering c : {Centering::None, Centering::SumToZero, Centering::AroundMarginals}) {
    if (to_string(c) == name) return c;
  }
  throw InputError("unknown centering '" + std::string(name) + "'");
}

PenaltyKind EffectSpec::effective_penalty() const {
  if (penalty) return *penalty;
  switch (kind) {
    case EffectKind::Categorical:
      return PenaltyKind::Ridge;
    case EffectKind::Smooth:
    case EffectKind::SmoothInteraction:
      return PenaltyKind::SecondDiff;
    default:
      return PenaltyKind::None;
  }
}

Centering EffectSpec::effective_centering() const {
  if (centering) return *centering;
  switch (kind) {
    case EffectKind::Smooth:
      return Centering::SumToZero;
    case EffectKind::SmoothInteraction:
      return Centering::AroundMarginals;
    default:
      return Centering::None;
  }
}

void EffectSpec::validate() const {
  const auto fail = [this](const std::string& what) {
    throw InputError("effect '" + name + "': " + what);
  };
  if (name.empty()) throw InputError("effect without a name");
  const std::size_t want = kind == EffectKind::Constant            ? 0
                           : kind == EffectKind::SmoothInteraction ? 2
                                                                   : 1;
  if (covariates.size() != want) {
    fail("expects " + std::to_string(want) + " covariate(s), got " +
         std::to_string(covariates.size()));
  }
  if (!(df > 0.0)) fail("df must be positive");
  const PenaltyKind p = effective_penalty();
  if (kind == EffectKind::Categorical && p == PenaltyKind::SecondDiff) {
    fail("second-difference penalty is undefined for a factor");
  }
  const Centering c = effective_centering();
  if (c == Centering::AroundMarginals && kind != EffectKind::SmoothInteraction) {
    fail("around_marginals centering needs an interaction");
  }
  if (kind == EffectKind::Smooth || kind == EffectKind::SmoothInteraction) {
    if (basis.degree < 1) fail("spline degree must be at least 1");
    if (basis.cyclic) fail("cyclic covariate splines are not supported");
  }
}

namespace {

MarginalBasis make_marginal(const EffectSpec& spec, const std::string& cov,
                            const CovariateTable& table, bool as_factor) {
  MarginalBasis mb;
  mb.covariate = cov;
  if (as_factor) {
    const auto& raw = table.raw(cov);
    std::set<std::string> levels(raw.begin(), raw.end());
    mb.factor = true;
    mb.levels.assign(levels.begin(), levels.end());
    if (mb.levels.size() < 2) {
      throw InputError("covariate '" + cov + "' needs at least two levels");
    }
    return mb;
  }
  const std::vector<double>& z = table.numeric(cov);
  if (z.empty()) throw InputError("covariate '" + cov + "' is empty");
  if (spec.kind == EffectKind::Linear) {
    double s = 0.0;
    for (double v : z) s += v;
    mb.center = s / static_cast<double>(z.size());
    return mb;
  }
  const auto [lo, hi] = std::minmax_element(z.begin(), z.end());
  if (!(*hi > *lo)) throw InputError("covariate '" + cov + "' is constant");
  mb.has_spline = true;
  mb.spline = BSplineBasis::build(spec.basis, z, *lo, *hi);
  return mb;
}

Eigen::Index level_index(const MarginalBasis& mb, const std::string& value) {
  const auto it = std::lower_bound(mb.levels.begin(), mb.levels.end(), value);
  if (it == mb.levels.end() || *it != value) {
    throw InputError("unseen level '" + value + "' of covariate '" + mb.covariate + "'");
  }
  return it - mb.levels.begin();
}

// Uncentered marginal design used inside interactions.
Eigen::MatrixXd marginal_design(const MarginalBasis& mb, const CovariateTable& table) {
  const Eigen::Index n = table.rows();
  if (mb.factor) {
    const auto& raw = table.raw(mb.covariate);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(mb.levels.size()));
    for (Eigen::Index i = 0; i < n; ++i) out(i, level_index(mb, raw[i])) = 1.0;
    return out;
  }
  const auto& z = table.numeric(mb.covariate);
  return mb.spline.design(Eigen::Map<const Eigen::VectorXd>(z.data(), n));
}

Eigen::MatrixXd marginal_penalty(const MarginalBasis& mb, PenaltyKind kind) {
  if (mb.factor) {
    const auto k = static_cast<Eigen::Index>(mb.levels.size());
    return Eigen::MatrixXd::Zero(k, k);
  }
  return mb.spline.penalty(kind);
}

Eigen::Index raw_dim(const CovariateBasis& cb) {
  switch (cb.spec.kind) {
    case EffectKind::Constant:
    case EffectKind::Linear:
      return 1;
    case EffectKind::Categorical:
      return static_cast<Eigen::Index>(cb.marginals[0].levels.size()) - 1;
    case EffectKind::Smooth:
      return cb.marginals[0].spline.dim();
    case EffectKind::SmoothInteraction: {
      Eigen::Index d = 1;
      for (const MarginalBasis& mb : cb.marginals) {
        d *= mb.factor ? static_cast<Eigen::Index>(mb.levels.size()) : mb.spline.dim();
      }
      return d;
    }
  }
  return 1;
}

}  // namespace

Eigen::MatrixXd CovariateBasis::raw_design(const CovariateTable& table) const {
  const Eigen::Index n = table.rows();
  switch (spec.kind) {
    case EffectKind::Constant:
      return Eigen::MatrixXd::Ones(n, 1);
    case EffectKind::Linear: {
      const auto& z = table.numeric(marginals[0].covariate);
      Eigen::MatrixXd out(n, 1);
      for (Eigen::Index i = 0; i < n; ++i) out(i, 0) = z[i] - marginals[0].center;
      return out;
    }
    case EffectKind::Categorical: {
      const MarginalBasis& mb = marginals[0];
      const auto& raw = table.raw(mb.covariate);
      const Eigen::Index k = static_cast<Eigen::Index>(mb.levels.size());
      Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, k - 1);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index lv = level_index(mb, raw[i]);
        if (lv == k - 1) {
          out.row(i).setConstant(-1.0);
        } else {
          out(i, lv) = 1.0;
        }
      }
      return out;
    }
    case EffectKind::Smooth:
      return marginal_design(marginals[0], table);
    case EffectKind::SmoothInteraction: {
      const Eigen::MatrixXd a = marginal_design(marginals[0], table);
      const Eigen::MatrixXd b = marginal_design(marginals[1], table);
      Eigen::MatrixXd out(n, a.cols() * b.cols());
      for (Eigen::Index i = 0; i < a.cols(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j)
          out.col(i * b.cols() + j) = a.col(i).cwiseProduct(b.col(j));
      return out;
    }
  }
  return Eigen::MatrixXd::Ones(n, 1);
}

Eigen::MatrixXd CovariateBasis::raw_penalty() const {
  const PenaltyKind kind = spec.effective_penalty();
  const Eigen::Index d = raw_dim(*this);
  switch (spec.kind) {
    case EffectKind::Smooth:
      return marginals[0].spline.penalty(kind);
    case EffectKind::SmoothInteraction: {
      const Eigen::MatrixXd pa = marginal_penalty(marginals[0], kind);
      const Eigen::MatrixXd pb = marginal_penalty(marginals[1], kind);
      return kron(pa, Eigen::MatrixXd::Identity(pb.rows(), pb.rows())) +
             kron(Eigen::MatrixXd::Identity(pa.rows(), pa.rows()), pb);
    }
    default:
      if (kind == PenaltyKind::Ridge) return Eigen::MatrixXd::Identity(d, d);
      return Eigen::MatrixXd::Zero(d, d);
  }
}

Eigen::MatrixXd CovariateBasis::design(const CovariateTable& table) const {
  Eigen::MatrixXd out = raw_design(table) * transform;
  if (parent) out -= parent->design(table) * parent_coef;
  return out;
}

CovariateBasis CovariateBasis::build(const EffectSpec& spec, const CovariateTable& table,
                                     std::shared_ptr<const CovariateBasis> parent) {
  spec.validate();
  CovariateBasis cb;
  cb.spec = spec;
  for (std::size_t c = 0; c < spec.covariates.size(); ++c) {
    const std::string& cov = spec.covariates[c];
    bool as_factor = spec.kind == EffectKind::Categorical;
    if (spec.kind == EffectKind::SmoothInteraction) as_factor = !table.is_numeric(cov);
    cb.marginals.push_back(make_marginal(spec, cov, table, as_factor));
  }
  if (spec.kind == EffectKind::SmoothInteraction && cb.marginals[0].factor &&
      cb.marginals[1].factor) {
    throw InputError("effect '" + spec.name + "': interaction needs a numeric covariate");
  }

  const Eigen::MatrixXd raw = cb.raw_design(table);
  const Eigen::Index n = raw.rows();
  const Centering centering = spec.effective_centering();
  Eigen::MatrixXd constraint(0, raw.cols());
  if (spec.kind == EffectKind::Smooth || spec.kind == EffectKind::SmoothInteraction) {
    if (centering == Centering::SumToZero) {
      constraint = Eigen::RowVectorXd::Ones(n) * raw;
    } else if (centering == Centering::AroundMarginals) {
      const Eigen::MatrixXd a = marginal_design(cb.marginals[0], table);
      const Eigen::MatrixXd b = marginal_design(cb.marginals[1], table);
      Eigen::MatrixXd lower(n, 1 + a.cols() + b.cols());
      lower << Eigen::VectorXd::Ones(n), a, b;
      constraint = lower.transpose() * raw;
    }
  }
  if (constraint.rows() > 0) {
    // Scale rows so the rank threshold is relative to each constraint.
    for (Eigen::Index r = 0; r < constraint.rows(); ++r) {
      const double s = constraint.row(r).norm();
      if (s > 0.0) constraint.row(r) /= s;
    }
    cb.transform = nullspace_transform(constraint).z;
  } else {
    cb.transform = Eigen::MatrixXd::Identity(raw.cols(), raw.cols());
  }
  if (cb.transform.cols() == 0) {
    throw InputError("effect '" + spec.name + "' has no columns left after centering");
  }
  const Eigen::MatrixXd p = cb.transform.transpose() * cb.raw_penalty() * cb.transform;
  cb.penalty = 0.5 * (p + p.transpose());

  if (parent) {
    cb.parent = std::move(parent);
    const Eigen::MatrixXd xp = cb.parent->design(table);
    const Eigen::MatrixXd x = raw * cb.transform;
    cb.parent_coef = xp.completeOrthogonalDecomposition().solve(x);
  }
  return cb;
}

}  // namespace shapeboost
