//
// Copyright 2026 The exactq Authors
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
//

// Small numerical toolbox: adaptive quadrature over piecewise-smooth
// integrands, monotone root bracketing and golden-section search.

#ifndef EXACTQ_NUMERIC_HPP_
#define EXACTQ_NUMERIC_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "exactq/error.hpp"

namespace exactq::numeric {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kLog2E = std::numbers::log2e;

// Integral of `f` over [lo, hi]; either end may be infinite. `breaks` lists
// interior points where f has a kink or singularity (modes, knots); the
// interval is split there so each piece is smooth.
inline double integrate(const std::function<double(double)>& f, double lo, double hi,
                        std::vector<double> breaks = {}, double tolerance = 1e-10) {
  if (!(lo < hi)) return 0.0;
  std::vector<double> points{lo};
  std::sort(breaks.begin(), breaks.end());
  for (double b : breaks) {
    if (b > points.back() && b < hi) points.push_back(b);
  }
  points.push_back(hi);

  auto guarded = [&f](double x) {
    const double y = f(x);
    return std::isfinite(y) ? y : 0.0;
  };

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double a = points[i];
    const double b = points[i + 1];
    if (std::isfinite(a) && std::isfinite(b)) {
      boost::math::quadrature::tanh_sinh<double> integrator;
      total += integrator.integrate(guarded, a, b, tolerance);
    } else if (std::isfinite(a)) {
      boost::math::quadrature::exp_sinh<double> integrator;
      total += integrator.integrate([&](double u) { return guarded(a + u); }, 0.0, kInf,
                                    tolerance);
    } else if (std::isfinite(b)) {
      boost::math::quadrature::exp_sinh<double> integrator;
      total += integrator.integrate([&](double u) { return guarded(b - u); }, 0.0, kInf,
                                    tolerance);
    } else {
      total += integrate(f, a, 0.0, {}, tolerance) + integrate(f, 0.0, b, {}, tolerance);
    }
  }
  return total;
}

// For nonincreasing `f` on [lo, hi]: the boundary point x where f crosses
// `level`, i.e. sup{x : f(x) >= level} within the bracket.
template <typename F>
double bisect_decreasing(F&& f, double level, double lo, double hi, double tolerance = 1e-12,
                         int max_iterations = 200) {
  for (int it = 0; it < max_iterations && hi - lo > tolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) >= level) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Expand `hi` geometrically from `start` until f(hi) < level.
template <typename F>
double bracket_decreasing(F&& f, double level, double start, double step) {
  double hi = start + step;
  for (int it = 0; it < 2000 && f(hi) >= level; ++it) {
    step *= 2.0;
    hi = start + step;
    if (!std::isfinite(hi)) break;
  }
  if (f(hi) >= level) throw NumericError("could not bracket superlevel boundary");
  return hi;
}

struct Minimum {
  double x;
  double value;
};

// Golden-section search for a minimum of a unimodal function on [lo, hi].
template <typename F>
Minimum golden_section_minimize(F&& f, double lo, double hi, double tolerance = 1e-13,
                                int max_iterations = 300) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iterations && hi - lo > tolerance * (1.0 + std::abs(c)); ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return fc < fd ? Minimum{c, fc} : Minimum{d, fd};
}

// Minimum of `f` on [lo, hi]: dense grid scan followed by golden-section
// refinement around the best grid point. Robust to a few local wiggles.
template <typename F>
Minimum grid_then_golden(F&& f, double lo, double hi, int grid = 2000) {
  double best_x = lo;
  double best = kInf;
  const double h = (hi - lo) / grid;
  for (int i = 0; i <= grid; ++i) {
    const double x = lo + h * i;
    const double y = f(x);
    if (y < best) {
      best = y;
      best_x = x;
    }
  }
  const double a = std::max(lo, best_x - h);
  const double b = std::min(hi, best_x + h);
  Minimum refined = golden_section_minimize(f, a, b);
  return refined.value < best ? refined : Minimum{best_x, best};
}

// Neumaier-compensated accumulator.
template <typename T>
class CompensatedSum {
 public:
  void add(T value) {
    const T t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + compensation_; }

 private:
  T sum_ = 0;
  T compensation_ = 0;
};

}  // namespace exactq::numeric

#endif  // EXACTQ_NUMERIC_HPP_
