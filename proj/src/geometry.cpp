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

#include "shapeboost/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shapeboost/errors.hpp"

namespace shapeboost {

namespace {

constexpr double kAlignTolerance = 1e-12;
constexpr double kSeriesThreshold = 1e-8;
constexpr double kCutLocusMargin = 1e-6;

void require_size(Eigen::Index got, Eigen::Index want) {
  if (got != want) {
    throw InputError("length mismatch: " + std::to_string(got) + " vs " + std::to_string(want));
  }
}

// sin(x)/x with a series guard.
double sinc(double x) {
  if (std::abs(x) < kSeriesThreshold) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

std::string_view to_string(GeometryKind kind) {
  return kind == GeometryKind::Form ? "form" : "shape";
}

GeometryKind parse_geometry(std::string_view name) {
  if (name == "form") return GeometryKind::Form;
  if (name == "shape") return GeometryKind::Shape;
  throw InputError("unknown geometry '" + std::string(name) + "'");
}

InnerProduct InnerProduct::diagonal(Eigen::VectorXd weights) {
  if (weights.size() == 0) throw InputError("empty weight vector");
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw InputError("diagonal weights must be positive and finite");
    }
  }
  InnerProduct ip;
  ip.is_diagonal_ = true;
  ip.one_norm_ = std::sqrt(weights.sum());
  ip.diag_ = std::move(weights);
  return ip;
}

InnerProduct InnerProduct::full(Eigen::MatrixXd weights) {
  if (weights.rows() == 0 || weights.rows() != weights.cols()) {
    throw InputError("full weight matrix must be square and nonempty");
  }
  const double scale = weights.cwiseAbs().maxCoeff();
  if ((weights - weights.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, scale)) {
    throw InputError("full weight matrix is not symmetric");
  }
  Eigen::MatrixXd sym = 0.5 * (weights + weights.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  if (llt.info() != Eigen::Success) throw InputError("full weight matrix is not positive definite");
  InnerProduct ip;
  ip.is_diagonal_ = false;
  ip.upper_ = llt.matrixU();
  ip.one_norm_ = std::sqrt(sym.sum());
  ip.full_ = std::move(sym);
  return ip;
}

Complex InnerProduct::operator()(const Eigen::Ref<const Eigen::VectorXcd>& a,
                                 const Eigen::Ref<const Eigen::VectorXcd>& b) const {
  require_size(a.size(), size());
  require_size(b.size(), size());
  if (is_diagonal_) {
    double re = 0.0, im = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      const double ar = a[i].real(), ai = a[i].imag(), br = b[i].real(), bi = b[i].imag();
      re += diag_[i] * (ar * br + ai * bi);
      im += diag_[i] * (ar * bi - ai * br);
    }
    return {re, im};
  }
  return a.dot(full_ * b);  // Eigen's dot conjugates the left operand
}

double InnerProduct::squared_norm(const Eigen::Ref<const Eigen::VectorXcd>& a) const {
  require_size(a.size(), size());
  if (is_diagonal_) return (diag_.array() * a.array().abs2()).sum();
  return std::max(0.0, (upper_ * a.real()).squaredNorm() + (upper_ * a.imag()).squaredNorm());
}

double InnerProduct::norm(const Eigen::Ref<const Eigen::VectorXcd>& a) const {
  return std::sqrt(squared_norm(a));
}

Eigen::VectorXcd InnerProduct::apply(const Eigen::Ref<const Eigen::VectorXcd>& v) const {
  require_size(v.size(), size());
  if (is_diagonal_) return diag_.cast<Complex>().cwiseProduct(v);
  return full_.cast<Complex>() * v;
}

Eigen::MatrixXd InnerProduct::real_gram(const Eigen::Ref<const Eigen::MatrixXcd>& design) const {
  require_size(design.rows(), size());
  const Eigen::MatrixXd re = design.real();
  const Eigen::MatrixXd im = design.imag();
  if (is_diagonal_) {
    const auto w = diag_.asDiagonal();
    return re.transpose() * w * re + im.transpose() * w * im;
  }
  const Eigen::MatrixXd rr = upper_ * re;
  const Eigen::MatrixXd ri = upper_ * im;
  return rr.transpose() * rr + ri.transpose() * ri;
}

Eigen::VectorXd InnerProduct::real_cross(const Eigen::Ref<const Eigen::MatrixXcd>& design,
                                         const Eigen::Ref<const Eigen::VectorXcd>& e) const {
  require_size(design.rows(), size());
  require_size(e.size(), size());
  const Eigen::VectorXcd we = apply(e);
  return design.real().transpose() * we.real() + design.imag().transpose() * we.imag();
}

Eigen::MatrixXd InnerProduct::sqrt_factor() const {
  if (is_diagonal_) return Eigen::MatrixXd(diag_.cwiseSqrt().asDiagonal());
  return upper_;
}

Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& grid) {
  const Eigen::Index k = grid.size();
  if (k < 2) throw InputError("trapezoid weights need at least two grid points");
  Eigen::VectorXd w(k);
  w[0] = 0.5 * (grid[1] - grid[0]);
  w[k - 1] = 0.5 * (grid[k - 1] - grid[k - 2]);
  for (Eigen::Index i = 1; i + 1 < k; ++i) w[i] = 0.5 * (grid[i + 1] - grid[i - 1]);
  return w;
}

Eigen::VectorXd uniform_weights(Eigen::Index k) {
  return Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
}

Eigen::VectorXd landmark_grid(Eigen::Index k) {
  if (k < 2) throw InputError("landmark grids need at least two points");
  return Eigen::VectorXd::LinSpaced(k, 0.0, 1.0);
}

void CurveSample::validate() const {
  const auto where = [this] { return " (curve '" + id + "')"; };
  const Eigen::Index k = values.size();
  if (k < 3) throw InputError("curve needs at least 3 evaluations" + where());
  if (grid.size() != k) throw InputError("grid and values differ in length" + where());
  if (weights.size() != k) throw InputError("weights and values differ in length" + where());
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0 || grid[i] > 1.0) {
      throw InputError("grid values must lie in [0, 1]" + where());
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw InputError("grid must be strictly increasing" + where());
    }
    if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag())) {
      throw InputError("non-finite curve value" + where());
    }
  }
  if ((values.array() - values[0]).abs().maxCoeff() == 0.0) {
    throw DegenerateAlignment("curve is constant", id);
  }
}

Eigen::VectorXcd center(const Eigen::Ref<const Eigen::VectorXcd>& y, const InnerProduct& ip) {
  const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(y.size());
  const Complex mean = ip(ones, y) / (ip.unit_norm() * ip.unit_norm());
  return y.array() - mean;
}

Eigen::VectorXcd pole_representative(const Eigen::Ref<const Eigen::VectorXcd>& p,
                                     const InnerProduct& ip, GeometryKind kind) {
  Eigen::VectorXcd rep = center(p, ip);
  if (kind == GeometryKind::Shape) {
    const double nrm = ip.norm(rep);
    if (nrm == 0.0) throw DegenerateAlignment("pole has zero size");
    rep /= nrm;
  }
  return rep;
}

Alignment align_to_representative(const Eigen::Ref<const Eigen::VectorXcd>& y,
                                  const Eigen::Ref<const Eigen::VectorXcd>& p_rep,
                                  const InnerProduct& ip, GeometryKind kind) {
  Eigen::VectorXcd yc = center(y, ip);
  const Complex z = ip(yc, p_rep);
  if (std::abs(z) < kAlignTolerance * ip.norm(yc) * ip.norm(p_rep) || std::abs(z) == 0.0) {
    throw DegenerateAlignment("rotation alignment undefined");
  }
  Alignment out;
  out.rotation = z / std::abs(z);
  out.values = out.rotation * yc;
  if (kind == GeometryKind::Shape) {
    out.scale = 1.0 / ip.norm(out.values);
    out.values *= out.scale;
  }
  return out;
}

Alignment representative(const Eigen::Ref<const Eigen::VectorXcd>& y,
                         const Eigen::Ref<const Eigen::VectorXcd>& p, const InnerProduct& ip,
                         GeometryKind kind) {
  return align_to_representative(y, pole_representative(p, ip, kind), ip, kind);
}

namespace {

// Distance between an aligned representative and a pole representative.
double aligned_dist(const Eigen::VectorXcd& y_rep, const Eigen::VectorXcd& p_rep,
                    const InnerProduct& ip, GeometryKind kind) {
  if (kind == GeometryKind::Form) return ip.norm(y_rep - p_rep);
  // arccos|<y, p>| evaluated as atan2 of the orthogonal and parallel parts,
  // which stays accurate near 0 and pi/2.
  const Complex c = ip(p_rep, y_rep);
  const double s = ip.norm(y_rep - c * p_rep);
  return std::atan2(s, std::clamp(std::abs(c), -1.0, 1.0));
}

}  // namespace

double geodesic_dist(const Eigen::Ref<const Eigen::VectorXcd>& y,
                     const Eigen::Ref<const Eigen::VectorXcd>& p, const InnerProduct& ip,
                     GeometryKind kind) {
  const Eigen::VectorXcd p_rep = pole_representative(p, ip, kind);
  const Alignment a = align_to_representative(y, p_rep, ip, kind);
  return aligned_dist(a.values, p_rep, ip, kind);
}

double TangentDefect::max() const { return std::max({translation, rotation, scale}); }

TangentDefect tangent_defect(const Eigen::Ref<const Eigen::VectorXcd>& p_rep,
                             const Eigen::Ref<const Eigen::VectorXcd>& v, const InnerProduct& ip,
                             GeometryKind kind) {
  TangentDefect d;
  const double nv = ip.norm(v);
  if (nv == 0.0) return d;
  const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(v.size());
  const Complex t = ip(ones, v) / ip.unit_norm();
  d.translation = std::max(std::abs(t.real()), std::abs(t.imag())) / nv;
  const Complex r = ip(v, p_rep) / (nv * ip.norm(p_rep));
  d.rotation = std::abs(r.imag());
  if (kind == GeometryKind::Shape) d.scale = std::abs(r.real());
  return d;
}

Eigen::VectorXcd project_tangent(const Eigen::Ref<const Eigen::VectorXcd>& p_rep,
                                 const Eigen::Ref<const Eigen::VectorXcd>& v,
                                 const InnerProduct& ip, GeometryKind kind) {
  const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(v.size());
  const double one_sq = ip.unit_norm() * ip.unit_norm();
  Eigen::VectorXcd out = v - (ip(ones, v) / one_sq) * ones;
  // The pole is re-centered here so the normals stay orthogonal even for
  // inputs that are only approximately centered.
  Eigen::VectorXcd ph = p_rep - (ip(ones, p_rep) / one_sq) * ones;
  const double np = ip.norm(ph);
  if (np == 0.0) throw DegenerateAlignment("pole has zero size");
  ph /= np;
  const Complex c = ip(ph, out);
  if (kind == GeometryKind::Shape) {
    out -= c * ph;
  } else {
    out -= Complex(0.0, c.imag()) * ph;
  }
  return out;
}

namespace {

void require_tangent(const Eigen::Ref<const Eigen::VectorXcd>& p_rep,
                     const Eigen::Ref<const Eigen::VectorXcd>& v, const InnerProduct& ip,
                     GeometryKind kind) {
  const TangentDefect d = tangent_defect(p_rep, v, ip, kind);
  if (d.max() > kTangentTolerance) {
    throw NotTangent("vector violates tangent constraints (defect " + std::to_string(d.max()) +
                     ")");
  }
}

}  // namespace

Eigen::VectorXcd exp_at_representative(const Eigen::Ref<const Eigen::VectorXcd>& p_rep,
                                       const Eigen::Ref<const Eigen::VectorXcd>& beta,
                                       const InnerProduct& ip, GeometryKind kind) {
  require_size(beta.size(), p_rep.size());
  require_tangent(p_rep, beta, ip, kind);
  if (kind == GeometryKind::Form) return p_rep + beta;
  const double b = ip.norm(beta);
  if (b >= std::numbers::pi - kCutLocusMargin) {
    throw OutOfDomain("shape Exp is undefined at or beyond the cut locus");
  }
  return std::cos(b) * p_rep + sinc(b) * beta;
}

Eigen::VectorXcd exp_map(const Eigen::Ref<const Eigen::VectorXcd>& p,
                         const Eigen::Ref<const Eigen::VectorXcd>& beta, const InnerProduct& ip,
                         GeometryKind kind) {
  return exp_at_representative(pole_representative(p, ip, kind), beta, ip, kind);
}

Eigen::VectorXcd log_at_representative(const Eigen::Ref<const Eigen::VectorXcd>& p_rep,
                                       const Eigen::Ref<const Eigen::VectorXcd>& y,
                                       const InnerProduct& ip, GeometryKind kind) {
  const Alignment a = align_to_representative(y, p_rep, ip, kind);
  if (kind == GeometryKind::Form) return a.values - p_rep;
  const Complex c = ip(p_rep, a.values);
  const Eigen::VectorXcd orth = a.values - c * p_rep;
  const double s = ip.norm(orth);
  if (s == 0.0) return Eigen::VectorXcd::Zero(y.size());
  const double d = std::atan2(s, std::abs(c));
  const double ratio = s < kSeriesThreshold ? 1.0 + s * s / 6.0 : d / s;
  return ratio * orth;
}

TangentEvals log_map(const Eigen::Ref<const Eigen::VectorXcd>& p,
                     const Eigen::Ref<const Eigen::VectorXcd>& y, const InnerProduct& ip,
                     GeometryKind kind) {
  TangentEvals out;
  out.pole = pole_representative(p, ip, kind);
  out.values = log_at_representative(out.pole, y, ip, kind);
  out.kind = kind;
  return out;
}

Eigen::VectorXcd transport_between(const Eigen::Ref<const Eigen::VectorXcd>& from,
                                   const Eigen::Ref<const Eigen::VectorXcd>& to,
                                   const Eigen::Ref<const Eigen::VectorXcd>& eps,
                                   const InnerProduct& ip, GeometryKind kind) {
  require_size(from.size(), to.size());
  require_size(eps.size(), to.size());
  const double nf = ip.norm(from);
  const double nt = ip.norm(to);
  if (nf == 0.0 || nt == 0.0) throw DegenerateAlignment("transport endpoint has zero size");
  const Complex z = ip(from, to) / (nf * nt);
  if (std::abs(z.imag()) > 1e-8) {
    throw InputError("transport endpoints are not mutually aligned");
  }
  const double denom = 1.0 + z.real();
  if (denom < 1e-12) throw AntipodalTransport("transport endpoints are antipodal");
  if (kind == GeometryKind::Shape) {
    // Endpoints are unit representatives here.
    const Complex a = ip(to, eps);
    return eps - (a / denom) * (from + to);
  }
  const Eigen::VectorXcd fh = from / nf;
  const Eigen::VectorXcd th = to / nt;
  const double a = ip(th, eps).imag();
  return eps - Complex(0.0, a / denom) * (fh + th);
}

TangentEvals parallel_transport(const TangentEvals& eps,
                                const Eigen::Ref<const Eigen::VectorXcd>& to,
                                const InnerProduct& ip) {
  TangentEvals out;
  out.kind = eps.kind;
  out.pole = to;
  out.values = transport_between(eps.pole, to, eps.values, ip, eps.kind);
  return out;
}

}  // namespace shapeboost
