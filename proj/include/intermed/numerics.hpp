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

// Grids, scalar maximization and fixed-rule quadrature shared by the revenue
// engine and the solvers.

#ifndef INTERMED_NUMERICS_HPP_
#define INTERMED_NUMERICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "intermed/errors.hpp"

namespace intermed {

inline std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  if (n < 2) throw Error(ErrorKind::kDomainError, "uniform_grid needs n >= 2");
  std::vector<double> grid(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) grid[i] = lo + step * static_cast<double>(i);
  grid.back() = hi;
  return grid;
}

inline std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
  if (n < 2) throw Error(ErrorKind::kDomainError, "geometric_grid needs n >= 2");
  if (!(lo > 0.0) || !(hi > lo)) {
    throw Error(ErrorKind::kDomainError, "geometric_grid needs 0 < lo < hi");
  }
  std::vector<double> grid(n);
  const double log_ratio = std::log(hi / lo);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = lo * std::exp(log_ratio * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

inline void sort_unique(std::vector<double>& xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

// Uniform points over [lo, hi] merged with geometric points that resolve the
// region just above the lower end, plus caller-supplied anchors (kinks and
// support endpoints) that fall inside the range.
inline std::vector<double> hybrid_grid(double lo, double hi, std::size_t n,
                                       std::span<const double> anchors = {}) {
  if (!(hi > lo)) return {lo};
  const std::size_t half = std::max<std::size_t>(n / 2, 2);
  std::vector<double> grid = uniform_grid(lo, hi, half);
  const double geo_lo = lo > 0.0 ? lo : hi * 1e-6;
  if (hi / geo_lo > 4.0) {
    auto geo = geometric_grid(geo_lo, hi, std::max<std::size_t>(n - half, 2));
    grid.insert(grid.end(), geo.begin(), geo.end());
  }
  for (double a : anchors) {
    if (a >= lo && a <= hi) grid.push_back(a);
  }
  sort_unique(grid);
  return grid;
}

struct Evaluation {
  double x = 0.0;
  double value = 0.0;
};

struct MaximizeResult {
  double argmax = 0.0;
  double value = 0.0;
  std::vector<Evaluation> grid_evaluations;
  std::vector<Evaluation> refinement_path;
};

// Golden-section search for a maximum of `f` on [a, b]; stops once the
// bracket is narrower than rel_tol * max(|x|, 1e-12).
template <typename F>
MaximizeResult golden_section_maximize(F&& f, double a, double b, double rel_tol,
                                       int max_iterations = 200) {
  constexpr double kInvPhi = 0.6180339887498949;
  MaximizeResult result;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  result.refinement_path.push_back({c, fc});
  result.refinement_path.push_back({d, fd});
  for (int it = 0; it < max_iterations; ++it) {
    const double scale = std::max(std::abs(0.5 * (a + b)), 1e-12);
    if (b - a <= rel_tol * scale) break;
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
      result.refinement_path.push_back({c, fc});
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
      result.refinement_path.push_back({d, fd});
    }
  }
  if (fc >= fd) {
    result.argmax = c;
    result.value = fc;
  } else {
    result.argmax = d;
    result.value = fd;
  }
  return result;
}

// Coarse grid scan followed by golden-section refinement of the bracket
// around the best grid point. Revenue curves here can be kinked or
// multimodal, so the grid is what finds the basin; the refinement only
// sharpens it and is discarded if it does worse than the grid.
template <typename F>
MaximizeResult maximize_on_grid(F&& f, std::span<const double> grid, double rel_tol) {
  if (grid.empty()) throw Error(ErrorKind::kDomainError, "empty search grid");
  MaximizeResult result;
  result.grid_evaluations.reserve(grid.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    result.grid_evaluations.push_back({grid[i], v});
    if (v > result.grid_evaluations[best].value) best = i;
  }
  result.argmax = grid[best];
  result.value = result.grid_evaluations[best].value;
  if (grid.size() < 2) return result;
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[best + 1 < grid.size() ? best + 1 : best];
  if (hi > lo) {
    auto refined = golden_section_maximize(f, lo, hi, rel_tol);
    result.refinement_path = std::move(refined.refinement_path);
    if (refined.value > result.value) {
      result.argmax = refined.argmax;
      result.value = refined.value;
    }
  }
  return result;
}

// Composite Gauss-Legendre rule: `panels` subintervals of [a, b], each with a
// 15-point rule. Panels are geometric when the range spans more than two
// decades above a positive lower end.
template <typename F>
double integrate(F&& f, double a, double b, std::size_t panels) {
  if (!(b > a)) return 0.0;
  panels = std::max<std::size_t>(panels, 1);
  const bool geometric = a > 0.0 && b / a > 100.0;
  std::vector<double> cuts = geometric ? geometric_grid(a, b, panels + 1)
                                       : uniform_grid(a, b, panels + 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += boost::math::quadrature::gauss<double, 15>::integrate(f, cuts[i], cuts[i + 1]);
  }
  return total;
}

// Integral over [a, b] split at interior breakpoints, so that jumps of the
// integrand sit on panel boundaries.
template <typename F>
double integrate_piecewise(F&& f, double a, double b, std::vector<double> breaks,
                           std::size_t panels_per_piece) {
  breaks.push_back(a);
  breaks.push_back(b);
  sort_unique(breaks);
  double total = 0.0;
  double prev = a;
  for (double x : breaks) {
    if (x <= a) continue;
    if (x > b) break;
    total += integrate(f, prev, x, panels_per_piece);
    prev = x;
  }
  return total;
}

}  // namespace intermed

#endif  // INTERMED_NUMERICS_HPP_
