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

// Seller and intermediary revenue when the seller posts p0 and the
// intermediary best responds, plus the no-intermediary benchmarks.
//
// Everything in the seller-first game is a functional of vbar = max_i phi_i(v_i):
// the seller is paid p0 whenever vbar >= p0 and the intermediary keeps the
// virtual surplus (vbar - p0)+. Two backends evaluate these:
//   * Monte Carlo: draw vbar once, sort it, then answer any p0 by binary search.
//   * Quadrature: G(t) = Pr[vbar >= t] in closed form through phi^{-1}, and
//     E[(vbar - p0)+] = integral of G over [p0, inf).

#ifndef INTERMED_REVENUE_HPP_
#define INTERMED_REVENUE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "intermed/distribution.hpp"
#include "intermed/errors.hpp"
#include "intermed/mechanisms.hpp"
#include "intermed/numerics.hpp"
#include "intermed/rng.hpp"

namespace intermed {

enum class Method { kMonteCarlo, kQuadrature, kClosedForm };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::kMonteCarlo: return "monte_carlo";
    case Method::kQuadrature: return "quadrature";
    case Method::kClosedForm: return "closed_form";
  }
  return "unknown";
}

// automatic: quadrature for one bidder, Monte Carlo otherwise.
enum class Backend { kAutomatic, kMonteCarlo, kQuadrature };

inline std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::kAutomatic: return "automatic";
    case Backend::kMonteCarlo: return "monte_carlo";
    case Backend::kQuadrature: return "quadrature";
  }
  return "unknown";
}

struct EstimatorConfig {
  std::size_t sample_count = 1'000'000;
  std::uint64_t seed = 20240601;
  std::size_t shards = 16;
  std::size_t quadrature_points = 256;
  Backend backend = Backend::kAutomatic;

  void validate() const {
    if (sample_count < 1) throw Error(ErrorKind::kDomainError, "sample_count must be >= 1");
    if (shards < 1) throw Error(ErrorKind::kDomainError, "shards must be >= 1");
    if (quadrature_points < 16) {
      throw Error(ErrorKind::kDomainError, "quadrature_points must be >= 16");
    }
  }

  Method method_for(const BidderProfile& profile) const {
    switch (backend) {
      case Backend::kMonteCarlo: return Method::kMonteCarlo;
      case Backend::kQuadrature: return Method::kQuadrature;
      case Backend::kAutomatic: break;
    }
    return profile.size() == 1 ? Method::kQuadrature : Method::kMonteCarlo;
  }
};

struct GameRevenues {
  double seller_revenue = 0.0;
  double intermediary_revenue = 0.0;
  double sale_probability = 0.0;
  double stderr_seller = 0.0;
  double stderr_intermediary = 0.0;
  Method method = Method::kClosedForm;
};

struct Estimate {
  double value = 0.0;
  double stderr = 0.0;
  Method method = Method::kClosedForm;
};

// ---------------------------------------------------------------------------
// Sampling

// Runs body(shard) for every shard, fanning out over at most
// hardware_concurrency workers. Each shard writes only its own output slice.
template <typename Body>
void for_each_shard(std::size_t shards, Body&& body) {
  const std::size_t workers =
      std::min<std::size_t>(shards, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t s = 0; s < shards; ++s) body(s);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t s = w; s < shards; s += workers) body(s);
    });
  }
  for (auto& t : pool) t.join();
}

// Half-open index range of shard s when n items are split over `shards`.
inline std::pair<std::size_t, std::size_t> shard_range(std::size_t n, std::size_t shards,
                                                       std::size_t s) {
  const auto begin = static_cast<std::size_t>((static_cast<unsigned __int128>(n) * s) / shards);
  const auto end = static_cast<std::size_t>((static_cast<unsigned __int128>(n) * (s + 1)) / shards);
  return {begin, end};
}

// Value draws for every bidder: out[k * n + i] is bidder i in sample k.
inline std::vector<double> sample_values(const BidderProfile& profile,
                                         const EstimatorConfig& cfg) {
  cfg.validate();
  const std::size_t n = profile.size();
  std::vector<double> out(cfg.sample_count * n);
  for_each_shard(cfg.shards, [&](std::size_t s) {
    CounterStream stream(substream_key(cfg.seed, s));
    const auto [begin, end] = shard_range(cfg.sample_count, cfg.shards, s);
    for (std::size_t k = begin; k < end; ++k) {
      for (std::size_t i = 0; i < n; ++i) out[k * n + i] = profile[i].quantile(stream.next_open01());
    }
  });
  return out;
}

// Draws of vbar = max_i phi_i(v_i), in sample order.
inline std::vector<double> sample_max_virtual_value(const BidderProfile& profile,
                                                    const EstimatorConfig& cfg) {
  cfg.validate();
  require_regular(profile);
  const std::size_t n = profile.size();
  std::vector<double> out(cfg.sample_count);
  for_each_shard(cfg.shards, [&](std::size_t s) {
    CounterStream stream(substream_key(cfg.seed, s));
    const auto [begin, end] = shard_range(cfg.sample_count, cfg.shards, s);
    for (std::size_t k = begin; k < end; ++k) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        const double v = profile[i].quantile(stream.next_open01());
        best = std::max(best, detail::virtual_value_extended(profile[i], v));
      }
      out[k] = best;
    }
  });
  return out;
}

// Sorted vbar sample with suffix sums, so revenues at any p0 cost O(log N).
class VirtualSurplusSample {
 public:
  explicit VirtualSurplusSample(std::vector<double> draws) : sorted_(std::move(draws)) {
    if (sorted_.empty()) throw Error(ErrorKind::kDomainError, "empty sample");
    std::sort(sorted_.begin(), sorted_.end());
    const std::size_t n = sorted_.size();
    suffix_.assign(n + 1, 0.0);
    suffix_sq_.assign(n + 1, 0.0);
    for (std::size_t k = n; k-- > 0;) {
      const double v = std::isfinite(sorted_[k]) ? sorted_[k] : 0.0;
      suffix_[k] = suffix_[k + 1] + v;
      suffix_sq_[k] = suffix_sq_[k + 1] + v * v;
    }
  }

  static VirtualSurplusSample draw(const BidderProfile& profile, const EstimatorConfig& cfg) {
    return VirtualSurplusSample(sample_max_virtual_value(profile, cfg));
  }

  std::size_t size() const { return sorted_.size(); }
  std::span<const double> sorted() const { return sorted_; }

  // Number of draws with vbar >= t.
  std::size_t count_at_least(double t) const {
    return static_cast<std::size_t>(sorted_.end() -
                                    std::lower_bound(sorted_.begin(), sorted_.end(), t));
  }

  GameRevenues revenues_at(double p0) const {
    const double n = static_cast<double>(sorted_.size());
    const std::size_t first = sorted_.size() - count_at_least(p0);
    const double k = n - static_cast<double>(first);
    const double q = k / n;
    // Sum of (v - p0) and (v - p0)^2 over the draws above p0.
    const double s1 = suffix_[first] - k * p0;
    const double s2 = std::max(suffix_sq_[first] - 2.0 * p0 * suffix_[first] + k * p0 * p0, 0.0);
    GameRevenues out;
    out.method = Method::kMonteCarlo;
    out.sale_probability = q;
    out.seller_revenue = p0 * q;
    out.intermediary_revenue = std::max(s1 / n, 0.0);
    if (sorted_.size() > 1) {
      out.stderr_seller = p0 * std::sqrt(q * (1.0 - q) / (n - 1.0));
      const double mean = s1 / n;
      const double var = std::max((s2 - n * mean * mean) / (n - 1.0), 0.0);
      out.stderr_intermediary = std::sqrt(var / n);
    }
    return out;
  }

  // Empirically optimal posted price on the sample itself.
  std::pair<double, double> best_posted_price() const {
    const double n = static_cast<double>(sorted_.size());
    double best_p = 0.0;
    double best_rev = 0.0;
    for (std::size_t k = 0; k < sorted_.size(); ++k) {
      if (!(sorted_[k] > 0.0)) continue;
      if (k > 0 && sorted_[k] == sorted_[k - 1]) continue;
      const double rev = sorted_[k] * (n - static_cast<double>(k)) / n;
      if (rev > best_rev) {
        best_rev = rev;
        best_p = sorted_[k];
      }
    }
    return {best_p, best_rev};
  }

 private:
  std::vector<double> sorted_;
  std::vector<double> suffix_;
  std::vector<double> suffix_sq_;
};

// ---------------------------------------------------------------------------
// Quadrature

// Pr[vbar >= t] computed bidder by bidder through phi_i^{-1}.
class MaxVirtualValueLaw {
 public:
  explicit MaxVirtualValueLaw(const BidderProfile& profile) : profile_(profile) {
    require_regular(profile_);
    for (const auto& d : profile_.distributions()) {
      phi_lo_.push_back(detail::virtual_value_extended(d, d.support_lo()));
      phi_top_.push_back(virtual_value_below_upper(d));
    }
  }

  // Pr[phi_i(v_i) >= t].
  double bidder_tail(std::size_t i, double t) const {
    const auto& d = profile_[i];
    if (t <= phi_lo_[i]) return 1.0;
    if (t > d.support_hi()) return 0.0;
    if (t > phi_top_[i]) return d.atom_hi();
    const auto v = inverse_virtual_value(d, t, 1e-12 * std::max(1.0, d.support_hi()));
    return v ? d.survival(*v) : 0.0;
  }

  double tail(double t) const {
    if (profile_.iid()) {
      return 1.0 - std::pow(1.0 - bidder_tail(0, t), static_cast<double>(profile_.size()));
    }
    double none = 1.0;
    for (std::size_t i = 0; i < profile_.size(); ++i) none *= 1.0 - bidder_tail(i, t);
    return 1.0 - none;
  }

  // E[(vbar - p0)+] = integral of Pr[vbar >= t] over [p0, max hi].
  double positive_part(double p0, std::size_t quadrature_points) const {
    const double top = profile_.max_hi();
    if (p0 >= top) return 0.0;
    std::vector<double> breaks;
    for (std::size_t i = 0; i < profile_.size(); ++i) {
      breaks.push_back(phi_lo_[i]);
      breaks.push_back(phi_top_[i]);
      breaks.push_back(profile_[i].support_hi());
    }
    const std::size_t panels = std::max<std::size_t>(quadrature_points / 15, 2);
    return integrate_piecewise([this](double t) { return tail(t); }, p0, top, breaks, panels);
  }

  const BidderProfile& profile() const { return profile_; }

 private:
  BidderProfile profile_;
  std::vector<double> phi_lo_;
  std::vector<double> phi_top_;
};

// ---------------------------------------------------------------------------
// Seller-first revenues

// Revenue evaluator for one profile and config. The Monte Carlo sample is
// drawn once at construction, so sweeping p0 reuses the same draws.
class SellerFirstEvaluator {
 public:
  SellerFirstEvaluator(const BidderProfile& profile, const EstimatorConfig& cfg)
      : cfg_(cfg), method_(cfg.method_for(profile)) {
    cfg_.validate();
    if (method_ == Method::kMonteCarlo) {
      sample_.emplace(VirtualSurplusSample::draw(profile, cfg_));
    } else {
      law_.emplace(profile);
    }
  }

  Method method() const { return method_; }

  double seller_revenue(double p0) const {
    check_price(p0);
    if (sample_) return sample_->revenues_at(p0).seller_revenue;
    return p0 * law_->tail(p0);
  }

  GameRevenues revenues(double p0) const {
    check_price(p0);
    if (sample_) return sample_->revenues_at(p0);
    GameRevenues out;
    out.method = Method::kQuadrature;
    out.sale_probability = law_->tail(p0);
    out.seller_revenue = p0 * out.sale_probability;
    out.intermediary_revenue = law_->positive_part(p0, cfg_.quadrature_points);
    return out;
  }

  // E[max(0, vbar)], the optimal revenue without an intermediary.
  Estimate opt_rev() const {
    const auto r = revenues(0.0);
    return {r.intermediary_revenue, r.stderr_intermediary, r.method};
  }

  const VirtualSurplusSample* sample() const { return sample_ ? &*sample_ : nullptr; }

 private:
  static void check_price(double p0) {
    if (!(p0 >= 0.0) || !std::isfinite(p0)) {
      throw Error(ErrorKind::kDomainError, "seller price must be finite and >= 0");
    }
  }

  EstimatorConfig cfg_;
  Method method_;
  std::optional<VirtualSurplusSample> sample_;
  std::optional<MaxVirtualValueLaw> law_;
};

inline GameRevenues seller_first_revenues(double p0, const BidderProfile& profile,
                                          const EstimatorConfig& cfg) {
  return SellerFirstEvaluator(profile, cfg).revenues(p0);
}

inline Estimate opt_rev(const BidderProfile& profile, const EstimatorConfig& cfg) {
  return SellerFirstEvaluator(profile, cfg).opt_rev();
}

// ---------------------------------------------------------------------------
// Posted prices without an intermediary

// Pr[max_i v_i >= p + r].
inline double access_probability(double r, double p, const BidderProfile& profile) {
  if (!(r >= 0.0) || !(p >= 0.0)) throw Error(ErrorKind::kDomainError, "prices must be >= 0");
  const double x = p + r;
  if (profile.iid()) return max_distribution(profile[0], static_cast<int>(profile.size())).survival(x);
  double none = 1.0;
  for (const auto& d : profile.distributions()) none *= 1.0 - d.survival(x);
  return 1.0 - none;
}

struct PostedPriceOptimum {
  double price = 0.0;
  double revenue = 0.0;
  MaximizeResult search;
};

inline std::vector<double> support_anchors(const BidderProfile& profile, double shift = 0.0) {
  std::vector<double> anchors;
  for (const auto& d : profile.distributions()) {
    anchors.push_back(d.support_lo() - shift);
    anchors.push_back(d.support_hi() - shift);
  }
  return anchors;
}

// Best anonymous posted price: 256-point grid over the pooled support, then
// golden-section refinement around the best grid point.
inline PostedPriceOptimum ap_rev(const BidderProfile& profile,
                                 const EstimatorConfig& /*cfg*/ = {}) {
  const auto anchors = support_anchors(profile);
  const auto grid = hybrid_grid(0.0, profile.max_hi(), 256, anchors);
  auto revenue = [&](double p) { return p * access_probability(0.0, p, profile); };
  PostedPriceOptimum out;
  out.search = maximize_on_grid(revenue, grid, 1e-9);
  out.price = out.search.argmax;
  out.revenue = out.search.value;
  return out;
}

// ---------------------------------------------------------------------------
// Randomized menus

inline Estimate randomized_menu_revenue(const RandomizedMenu& menu,
                                        const VirtualSurplusSample& sample) {
  const auto draws = sample.sorted();
  const double n = static_cast<double>(draws.size());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double vbar : draws) {
    const auto choice = menu_choice(menu, vbar);
    if (!choice.index) continue;
    const double beta = menu.options()[*choice.index].price;
    sum += beta;
    sum_sq += beta * beta;
  }
  Estimate out;
  out.method = Method::kMonteCarlo;
  out.value = sum / n;
  if (draws.size() > 1) {
    const double var = std::max((sum_sq - n * out.value * out.value) / (n - 1.0), 0.0);
    out.stderr = std::sqrt(var / n);
  }
  return out;
}

inline Estimate randomized_menu_revenue(const RandomizedMenu& menu, const BidderProfile& profile,
                                        const EstimatorConfig& cfg) {
  return randomized_menu_revenue(menu, VirtualSurplusSample::draw(profile, cfg));
}

}  // namespace intermed

#endif  // INTERMED_REVENUE_HPP_
