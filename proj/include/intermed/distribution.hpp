// Copyright 2026 The intermed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Value distributions on a bounded support [lo, hi] with an optional point
// mass at hi, together with the virtual-value machinery built on top of them.
//
// A distribution is an immutable handle around a DistributionModel that
// describes the continuous part. The model is only ever queried on [lo, hi];
// at hi it reports left limits, so model.tail(hi) equals the atom mass.

#ifndef INTERMED_DISTRIBUTION_HPP_
#define INTERMED_DISTRIBUTION_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "intermed/errors.hpp"
#include "intermed/numerics.hpp"

namespace intermed {

class DistributionModel {
 public:
  virtual ~DistributionModel() = default;

  // F(x) of the continuous part; F(hi) is the left limit 1 - atom.
  virtual double cdf(double x) const = 0;
  // 1 - F(x); overridden where a direct formula avoids cancellation.
  virtual double tail(double x) const { return 1.0 - cdf(x); }
  virtual double pdf(double x) const = 0;
  // Inverse of F on [0, 1 - atom) when known in closed form.
  virtual std::optional<double> quantile(double /*u*/) const { return std::nullopt; }
};

struct FamilyParam {
  std::string name;
  double value = 0.0;
};

class ValueDistribution {
 public:
  ValueDistribution(std::string family, std::vector<FamilyParam> params, double lo,
                    double hi, double atom_hi,
                    std::shared_ptr<const DistributionModel> model)
      : family_(std::move(family)),
        params_(std::move(params)),
        lo_(lo),
        hi_(hi),
        atom_hi_(atom_hi),
        model_(std::move(model)) {
    if (!(lo_ >= 0.0) || !(hi_ > lo_) || !std::isfinite(hi_)) {
      throw Error(ErrorKind::kDomainError, "support must satisfy 0 <= lo < hi < inf");
    }
    if (!(atom_hi_ >= 0.0 && atom_hi_ < 1.0)) {
      throw Error(ErrorKind::kDomainError, "atom at the upper endpoint must lie in [0, 1)");
    }
    if (!model_) throw Error(ErrorKind::kDomainError, "missing distribution model");
  }

  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  double atom_hi() const { return atom_hi_; }
  const std::string& family() const { return family_; }
  const std::vector<FamilyParam>& params() const { return params_; }
  const DistributionModel& model() const { return *model_; }

  std::optional<double> param(std::string_view name) const {
    for (const auto& p : params_) {
      if (p.name == name) return p.value;
    }
    return std::nullopt;
  }

  // True when both handles share one model instance (structurally identical).
  bool same_model(const ValueDistribution& other) const { return model_ == other.model_; }

  // Pr[v <= x].
  double cdf(double x) const {
    if (x < lo_) return 0.0;
    if (x >= hi_) return 1.0;
    return std::clamp(model_->cdf(x), 0.0, 1.0);
  }

  // Pr[v > x].
  double tail(double x) const {
    if (x < lo_) return 1.0;
    if (x >= hi_) return 0.0;
    return std::clamp(model_->tail(x), 0.0, 1.0);
  }

  // Pr[v >= x]. Prices that land on hi up to rounding count as hitting it, so
  // posting exactly hi sells with the atom probability.
  double survival(double x) const {
    if (x <= lo_) return 1.0;
    if (at_upper(x)) return atom_hi_;
    if (x > hi_) return 0.0;
    return std::clamp(model_->tail(x), 0.0, 1.0);
  }

  // Density of the continuous part; at hi this is the left limit.
  double pdf(double x) const {
    if (x < lo_ || x > hi_) return 0.0;
    return std::max(model_->pdf(x), 0.0);
  }

  // Smallest x with cdf(x) >= u, for u in (0, 1).
  double quantile(double u) const {
    if (u >= 1.0 - atom_hi_) return hi_;
    if (u <= 0.0) return lo_;
    if (auto q = model_->quantile(u)) return std::clamp(*q, lo_, hi_);
    double a = lo_;
    double b = hi_;
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, b); ++it) {
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      if (model_->cdf(m) >= u) {
        b = m;
      } else {
        a = m;
      }
    }
    return b;
  }

  bool at_upper(double x) const {
    return std::abs(x - hi_) <= 1e-12 * std::max(1.0, std::abs(hi_));
  }

  std::string describe() const {
    std::ostringstream os;
    os << family_ << "(";
    for (std::size_t i = 0; i < params_.size(); ++i) {
      if (i) os << ", ";
      os << params_[i].name << "=" << params_[i].value;
    }
    os << ")";
    return os.str();
  }

 private:
  std::string family_;
  std::vector<FamilyParam> params_;
  double lo_;
  double hi_;
  double atom_hi_;
  std::shared_ptr<const DistributionModel> model_;
};

// ---------------------------------------------------------------------------
// Families

namespace detail {

class UniformModel final : public DistributionModel {
 public:
  UniformModel(double lo, double hi) : lo_(lo), hi_(hi) {}
  double cdf(double x) const override { return (x - lo_) / (hi_ - lo_); }
  double tail(double x) const override { return (hi_ - x) / (hi_ - lo_); }
  double pdf(double) const override { return 1.0 / (hi_ - lo_); }
  std::optional<double> quantile(double u) const override { return lo_ + u * (hi_ - lo_); }

 private:
  double lo_;
  double hi_;
};

class ExponentialModel final : public DistributionModel {
 public:
  explicit ExponentialModel(double rate) : rate_(rate) {}
  double cdf(double x) const override { return -std::expm1(-rate_ * x); }
  double tail(double x) const override { return std::exp(-rate_ * x); }
  double pdf(double x) const override { return rate_ * std::exp(-rate_ * x); }
  std::optional<double> quantile(double u) const override { return -std::log1p(-u) / rate_; }

 private:
  double rate_;
};

// 1 - x^-(1+eps) on [1, H), remaining mass H^-(1+eps) sits at H.
class ParetoTruncatedModel final : public DistributionModel {
 public:
  explicit ParetoTruncatedModel(double epsilon) : shape_(1.0 + epsilon) {}
  double cdf(double x) const override { return -std::expm1(-shape_ * std::log(x)); }
  double tail(double x) const override { return std::pow(x, -shape_); }
  double pdf(double x) const override { return shape_ * std::pow(x, -shape_ - 1.0); }
  std::optional<double> quantile(double u) const override {
    return std::exp(-std::log1p(-u) / shape_);
  }

 private:
  double shape_;
};

class TableModel final : public DistributionModel {
 public:
  TableModel(std::vector<double> xs, std::vector<double> fs)
      : xs_(std::move(xs)), fs_(std::move(fs)) {}

  double cdf(double x) const override {
    const std::size_t k = segment(x);
    const double w = (x - xs_[k]) / (xs_[k + 1] - xs_[k]);
    return fs_[k] + w * (fs_[k + 1] - fs_[k]);
  }
  double pdf(double x) const override {
    const std::size_t k = segment(x);
    return (fs_[k + 1] - fs_[k]) / (xs_[k + 1] - xs_[k]);
  }
  std::optional<double> quantile(double u) const override {
    auto it = std::upper_bound(fs_.begin(), fs_.end(), u);
    if (it == fs_.begin()) return xs_.front();
    if (it == fs_.end()) return xs_.back();
    const std::size_t k = static_cast<std::size_t>(it - fs_.begin()) - 1;
    const double w = (u - fs_[k]) / (fs_[k + 1] - fs_[k]);
    return xs_[k] + w * (xs_[k + 1] - xs_[k]);
  }

 private:
  std::size_t segment(double x) const {
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t k = it == xs_.begin() ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
    return std::min(k, xs_.size() - 2);
  }

  std::vector<double> xs_;
  std::vector<double> fs_;
};

class MaxModel final : public DistributionModel {
 public:
  MaxModel(ValueDistribution base, int n) : base_(std::move(base)), n_(n) {}
  double cdf(double x) const override { return std::pow(base_.model().cdf(x), n_); }
  double tail(double x) const override {
    const double t = std::clamp(base_.model().tail(x), 0.0, 1.0);
    return -std::expm1(n_ * std::log1p(-t));
  }
  double pdf(double x) const override {
    const double f = base_.model().cdf(x);
    return n_ * std::pow(f, n_ - 1) * base_.model().pdf(x);
  }
  std::optional<double> quantile(double u) const override {
    return base_.quantile(std::pow(u, 1.0 / n_));
  }

 private:
  ValueDistribution base_;
  int n_;
};

// Conditional law of v - p given v >= p.
class ShiftedModel final : public DistributionModel {
 public:
  ShiftedModel(ValueDistribution base, double shift, double mass_above)
      : base_(std::move(base)), shift_(shift), mass_above_(mass_above) {}
  double cdf(double x) const override { return 1.0 - tail(x); }
  double tail(double x) const override { return base_tail(x + shift_) / mass_above_; }
  double pdf(double x) const override {
    const double y = std::clamp(x + shift_, base_.support_lo(), base_.support_hi());
    return base_.model().pdf(y) / mass_above_;
  }

 private:
  double base_tail(double y) const {
    if (y <= base_.support_lo()) return 1.0;
    return base_.model().tail(std::min(y, base_.support_hi()));
  }

  ValueDistribution base_;
  double shift_;
  double mass_above_;
};

}  // namespace detail

inline ValueDistribution make_uniform(double lo, double hi) {
  if (!(hi > lo)) throw Error(ErrorKind::kDomainError, "uniform needs lo < hi");
  return ValueDistribution("uniform", {{"lo", lo}, {"hi", hi}}, lo, hi, 0.0,
                           std::make_shared<detail::UniformModel>(lo, hi));
}

// Cap used when an exponential is requested without an explicit truncation
// point: the 1 - 1e-9 quantile, never above 1e6.
inline double default_exponential_cap(double rate) {
  return std::min(1e6, -std::log(1e-9) / rate);
}

// Exponential(rate) truncated at `cap`; the mass beyond the cap sits at cap.
inline ValueDistribution make_exponential(double rate, std::optional<double> cap = {}) {
  if (!(rate > 0.0)) throw Error(ErrorKind::kDomainError, "exponential needs rate > 0");
  const double hi = cap.value_or(default_exponential_cap(rate));
  if (!(hi > 0.0)) throw Error(ErrorKind::kDomainError, "exponential cap must be > 0");
  return ValueDistribution("exponential", {{"rate", rate}, {"cap", hi}}, 0.0, hi,
                           std::exp(-rate * hi),
                           std::make_shared<detail::ExponentialModel>(rate));
}

struct ParetoTruncatedParams {
  double epsilon = 1.0;
  double h = 100.0;

  // (1 + 1/eps)^(1 + 1/eps): H must exceed this for the separation instances.
  static double separation_threshold(double epsilon) {
    return std::pow(1.0 + 1.0 / epsilon, 1.0 + 1.0 / epsilon);
  }

  static ParetoTruncatedParams make(double epsilon, double h, bool require_separation = false) {
    if (!(epsilon > 0.0)) throw Error(ErrorKind::kDomainError, "epsilon must be > 0");
    if (!(h > 1.0)) throw Error(ErrorKind::kDomainError, "H must be > 1");
    if (require_separation && !(h > separation_threshold(epsilon))) {
      throw Error(ErrorKind::kSeparationViolated,
                  "H must exceed (1+1/eps)^(1+1/eps) = " +
                      std::to_string(separation_threshold(epsilon)));
    }
    return {epsilon, h};
  }

  bool separated() const { return h > separation_threshold(epsilon); }
  double alpha() const { return epsilon / (1.0 + epsilon); }
};

inline ValueDistribution make_pareto_truncated(const ParetoTruncatedParams& params) {
  if (!(params.epsilon > 0.0) || !(params.h > 1.0)) {
    throw Error(ErrorKind::kDomainError, "pareto_truncated needs epsilon > 0 and H > 1");
  }
  return ValueDistribution(
      "pareto_truncated", {{"epsilon", params.epsilon}, {"H", params.h}}, 1.0, params.h,
      std::pow(params.h, -(1.0 + params.epsilon)),
      std::make_shared<detail::ParetoTruncatedModel>(params.epsilon));
}

// Piecewise-linear CDF through (x, F(x)) knots. x must be strictly increasing,
// F nondecreasing and starting at 0; any mass missing at the last knot
// becomes the upper atom.
inline ValueDistribution make_table(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw Error(ErrorKind::kDomainError, "table needs >= 2 points");
  std::vector<double> xs;
  std::vector<double> fs;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [x, f] = points[i];
    if (!std::isfinite(x) || !std::isfinite(f) || f < 0.0 || f > 1.0) {
      throw Error(ErrorKind::kDomainError, "table point " + std::to_string(i) + " is invalid");
    }
    if (i > 0 && !(x > xs.back())) {
      throw Error(ErrorKind::kDomainError,
                  "table x values must be strictly increasing at point " + std::to_string(i));
    }
    if (i > 0 && f < fs.back()) {
      throw Error(ErrorKind::kDomainError,
                  "table F values must be nondecreasing at point " + std::to_string(i));
    }
    xs.push_back(x);
    fs.push_back(f);
  }
  if (fs.front() != 0.0) {
    throw Error(ErrorKind::kDomainError, "table must start at F = 0 (interior atoms are rejected)");
  }
  const double atom = 1.0 - fs.back();
  const double lo = xs.front();
  const double hi = xs.back();
  return ValueDistribution("table", {{"points", static_cast<double>(points.size())}}, lo, hi,
                           atom, std::make_shared<detail::TableModel>(xs, fs));
}

// Point mass at v, modelled as uniform on [v - delta, v] with delta = rel_delta * v.
inline ValueDistribution make_constant_value(double v, double rel_delta = 1e-4) {
  if (!(v > 0.0)) throw Error(ErrorKind::kDomainError, "constant value must be > 0");
  const double delta = rel_delta * v;
  return ValueDistribution("constant", {{"value", v}, {"delta", delta}}, v - delta, v, 0.0,
                           std::make_shared<detail::UniformModel>(v - delta, v));
}

// ---------------------------------------------------------------------------
// Virtual values

namespace detail {

// phi extended to the whole closed support: the upper endpoint maps to hi,
// and zero-density points with mass above them map to -inf.
inline double virtual_value_extended(const ValueDistribution& dist, double v) {
  if (v >= dist.support_hi()) return dist.support_hi();
  const double f = dist.pdf(v);
  const double t = dist.tail(v);
  if (!(f > 0.0)) return t > 0.0 ? -std::numeric_limits<double>::infinity() : v;
  return v - t / f;
}

}  // namespace detail

// phi(v) = v - (1 - F(v)) / f(v), with phi(hi) = hi when hi carries an atom.
inline double virtual_value(const ValueDistribution& dist, double v) {
  if (!(v >= dist.support_lo() && v <= dist.support_hi())) {
    throw Error(ErrorKind::kOutOfSupport,
                "v=" + std::to_string(v) + " outside " + dist.describe());
  }
  if (v == dist.support_hi() && dist.atom_hi() > 0.0) return v;
  const double f = dist.pdf(v);
  if (!(f > 0.0)) {
    throw Error(ErrorKind::kZeroDensity, "pdf vanishes at v=" + std::to_string(v));
  }
  return v - dist.tail(v) / f;
}

// Left limit of phi at the upper endpoint; differs from phi(hi) only when hi
// carries an atom.
inline double virtual_value_below_upper(const ValueDistribution& dist) {
  const double hi = dist.support_hi();
  const double f = dist.model().pdf(hi);
  if (!(f > 0.0)) return hi;
  return hi - std::max(dist.model().tail(hi), 0.0) / f;
}

inline constexpr double kDefaultInversionTol = 1e-9;

// Smallest v in the support with phi(v) >= t, to absolute accuracy tol.
// Returns the lower endpoint when t <= phi(lo) and nullopt when t > phi(hi).
inline std::optional<double> inverse_virtual_value(const ValueDistribution& dist, double t,
                                                   double tol = kDefaultInversionTol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::kDomainError, "tolerance must be > 0");
  double a = dist.support_lo();
  double b = dist.support_hi();
  double phi_a = detail::virtual_value_extended(dist, a);
  double phi_b = detail::virtual_value_extended(dist, b);
  if (t <= phi_a) return a;
  if (t > phi_b) return std::nullopt;
  if (phi_a > phi_b) {
    throw Error(ErrorKind::kNotRegular, "phi(lo) > phi(hi) for " + dist.describe());
  }
  for (int it = 0; it < 400 && b - a > tol; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double phi_m = detail::virtual_value_extended(dist, m);
    const double slack = 1e-9 * (1.0 + std::abs(phi_m));
    if (phi_m < phi_a - slack || phi_m > phi_b + slack) {
      throw Error(ErrorKind::kNotRegular,
                  "virtual value not monotone near v=" + std::to_string(m) + " for " +
                      dist.describe());
    }
    if (phi_m >= t) {
      b = m;
      phi_b = phi_m;
    } else {
      a = m;
      phi_a = phi_m;
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// Regularity

struct RegularityReport {
  double alpha_tested = 0.0;
  bool passes = false;             // phi(y) - phi(x) >= alpha (y - x) on every grid pair
  double alpha_lower = 0.0;        // smallest slope of phi between neighbouring grid points
  bool is_regular = false;
  bool is_mhr = false;
  std::optional<double> violation_point;
  std::size_t grid_size = 0;
};

// Upper end of the region carrying all but `tail_mass` of the probability;
// hi itself when the atom is at least that heavy.
inline double effective_upper(const ValueDistribution& dist, double tail_mass = 1e-10) {
  if (dist.atom_hi() >= tail_mass) return dist.support_hi();
  double a = dist.support_lo();
  double b = dist.support_hi();
  if (dist.tail(a) <= tail_mass) return a;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    if (dist.tail(m) > tail_mass) {
      a = m;
    } else {
      b = m;
    }
  }
  return b;
}

// Grid over the effective support: geometric when it spans more than two
// decades above a positive lower endpoint, uniform otherwise.
inline std::vector<double> support_grid(const ValueDistribution& dist, std::size_t n) {
  const double lo = dist.support_lo();
  const double hi = effective_upper(dist);
  if (!(hi > lo)) return {lo};
  if (lo > 0.0 && hi / lo > 100.0) return geometric_grid(lo, hi, n);
  return uniform_grid(lo, hi, n);
}

inline RegularityReport check_alpha_strong_regularity(const ValueDistribution& dist,
                                                      double alpha,
                                                      std::size_t grid_size = 1000) {
  if (!(alpha >= 0.0)) throw Error(ErrorKind::kDomainError, "alpha must be >= 0");
  if (grid_size < 3) throw Error(ErrorKind::kDomainError, "grid_size must be >= 3");
  const auto grid = support_grid(dist, grid_size);
  std::vector<double> phi(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    phi[i] = detail::virtual_value_extended(dist, grid[i]);
  }
  RegularityReport report;
  report.alpha_tested = alpha;
  report.grid_size = grid.size();
  report.passes = true;
  report.is_regular = true;
  report.is_mhr = true;
  double min_slope = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double dx = grid[i + 1] - grid[i];
    const double dphi = phi[i + 1] - phi[i];
    if (std::isinf(phi[i])) continue;
    const double tol = 1e-9 * (1.0 + std::abs(phi[i]) + std::abs(phi[i + 1]));
    min_slope = std::min(min_slope, dphi / dx);
    if (dphi < -tol) report.is_regular = false;
    if (dphi < dx - tol) report.is_mhr = false;
    if (dphi < alpha * dx - tol && report.passes) {
      report.passes = false;
      report.violation_point = grid[i];
    }
  }
  if (!std::isfinite(min_slope)) min_slope = 0.0;
  report.alpha_lower = report.is_regular ? std::max(min_slope, 0.0) : min_slope;
  return report;
}

// Strong-regularity level certified on the grid, capped at 1 (MHR).
inline double certified_alpha(const ValueDistribution& dist, std::size_t grid_size = 1000) {
  const auto report = check_alpha_strong_regularity(dist, 0.0, grid_size);
  if (!report.is_regular) return 0.0;
  if (report.is_mhr) return 1.0;
  return std::min(report.alpha_lower, 1.0);
}

// c(alpha) = alpha^(1/(1-alpha)) on (0, 1), 1/e at alpha = 1.
inline double c_alpha(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw Error(ErrorKind::kDomainError, "c(alpha) needs 0 < alpha <= 1");
  }
  if (alpha == 1.0) return std::exp(-1.0);
  return std::exp(std::log1p(alpha - 1.0) / (1.0 - alpha));
}

// ---------------------------------------------------------------------------
// Derived distributions

inline double hazard_rate(const ValueDistribution& dist, double v) {
  const double t = dist.tail(v);
  if (t <= 1e-12) {
    throw Error(ErrorKind::kSaturatedCdf, "cdf saturated at v=" + std::to_string(v));
  }
  return dist.pdf(v) / t;
}

// Law of the maximum of n i.i.d. draws: CDF F^n.
inline ValueDistribution max_distribution(const ValueDistribution& dist, int n) {
  if (n < 1) throw Error(ErrorKind::kDomainError, "max_distribution needs n >= 1");
  if (n == 1) return dist;
  const double atom = -std::expm1(n * std::log1p(-dist.atom_hi()));
  auto params = dist.params();
  params.push_back({"max_of", static_cast<double>(n)});
  return ValueDistribution("max:" + dist.family(), std::move(params), dist.support_lo(),
                           dist.support_hi(), atom,
                           std::make_shared<detail::MaxModel>(dist, n));
}

// G(x) = (F(x + p) - F(p)) / (1 - F(p)): the value above p, given v >= p.
inline ValueDistribution shifted_distribution(const ValueDistribution& dist, double p) {
  if (p >= dist.support_hi() || dist.cdf(p) >= 1.0) {
    throw Error(ErrorKind::kSaturatedCdf, "no mass above p=" + std::to_string(p));
  }
  if (p == 0.0) return dist;
  const double mass_above = dist.survival(p);
  if (!(mass_above > 0.0)) {
    throw Error(ErrorKind::kSaturatedCdf, "no mass above p=" + std::to_string(p));
  }
  auto params = dist.params();
  params.push_back({"shift", p});
  return ValueDistribution("shifted:" + dist.family(), std::move(params),
                           std::max(0.0, dist.support_lo() - p), dist.support_hi() - p,
                           dist.atom_hi() / mass_above,
                           std::make_shared<detail::ShiftedModel>(dist, p, mass_above));
}

// ---------------------------------------------------------------------------
// Bidders

class BidderProfile {
 public:
  explicit BidderProfile(std::vector<ValueDistribution> distributions)
      : distributions_(std::move(distributions)) {
    if (distributions_.empty()) {
      throw Error(ErrorKind::kDomainError, "a profile needs at least one bidder");
    }
    iid_ = std::all_of(distributions_.begin(), distributions_.end(),
                       [&](const ValueDistribution& d) { return d.same_model(distributions_[0]); });
  }

  static BidderProfile iid(const ValueDistribution& dist, std::size_t n) {
    return BidderProfile(std::vector<ValueDistribution>(n, dist));
  }

  std::size_t size() const { return distributions_.size(); }
  bool iid() const { return iid_; }
  const ValueDistribution& operator[](std::size_t i) const { return distributions_[i]; }
  const std::vector<ValueDistribution>& distributions() const { return distributions_; }

  double min_lo() const {
    double m = distributions_[0].support_lo();
    for (const auto& d : distributions_) m = std::min(m, d.support_lo());
    return m;
  }
  double max_hi() const {
    double m = distributions_[0].support_hi();
    for (const auto& d : distributions_) m = std::max(m, d.support_hi());
    return m;
  }

 private:
  std::vector<ValueDistribution> distributions_;
  bool iid_ = false;
};

// Throws NotRegular unless every bidder's phi is nondecreasing on its grid.
inline void require_regular(const BidderProfile& profile, std::size_t grid_size = 256) {
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i > 0 && profile[i].same_model(profile[0])) continue;
    const auto report = check_alpha_strong_regularity(profile[i], 0.0, grid_size);
    if (!report.is_regular) {
      throw Error(ErrorKind::kNotRegular,
                  "bidder " + std::to_string(i) + " (" + profile[i].describe() +
                      ") has a decreasing virtual value");
    }
  }
}

}  // namespace intermed

#endif  // INTERMED_DISTRIBUTION_HPP_
