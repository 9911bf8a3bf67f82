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

// Unimodal densities and their layer densities.
//
// A UnimodalPdf bundles a density with what the layered quantizers need:
// the mode, the peak height, and the boundaries b-(t), b+(t) of the
// superlevel set {x : f(x) >= t}. Objects are immutable and cheap to copy.

#ifndef EXACTQ_DISTRIBUTIONS_HPP_
#define EXACTQ_DISTRIBUTIONS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "exactq/error.hpp"
#include "exactq/numeric.hpp"
#include "exactq/random.hpp"

namespace exactq {

namespace detail {

struct DensityShape {
  std::string name;
  double mode = 0.0;
  double peak = 0.0;
  double support_lo = -numeric::kInf;
  double support_hi = numeric::kInf;
  double mean = 0.0;
  double variance = 1.0;
  double mean_abs = 0.0;
  bool symmetric = false;  // about the mode
  bool plateau = false;    // argmax is an interval
};

class DensityModel {
 public:
  explicit DensityModel(DensityShape shape) : shape_(std::move(shape)) {}
  virtual ~DensityModel() = default;

  virtual double pdf(double x) const = 0;
  virtual double sample(SharedRandomness& rng) const = 0;

  virtual double derivative(double x) const {
    const double h = 1e-6 * std::sqrt(shape_.variance);
    return (pdf(x + h) - pdf(x - h)) / (2.0 * h);
  }

  virtual double cdf(double x) const {
    if (x <= shape_.support_lo) return 0.0;
    if (x >= shape_.support_hi) return 1.0;
    auto f = [this](double y) { return pdf(y); };
    if (x <= shape_.mode) return numeric::integrate(f, shape_.support_lo, x, breakpoints());
    return 1.0 - numeric::integrate(f, x, shape_.support_hi, breakpoints());
  }

  // sup{x : f(x) >= level}
  virtual double b_plus(double level) const {
    if (level > shape_.peak) return shape_.mode;
    if (level <= 0.0) return shape_.support_hi;
    auto f = [this](double x) { return pdf(x); };
    double hi = shape_.support_hi;
    if (!std::isfinite(hi)) {
      hi = numeric::bracket_decreasing(f, level, shape_.mode, std::sqrt(shape_.variance));
    }
    return numeric::bisect_decreasing(f, level, shape_.mode, hi);
  }

  // inf{x : f(x) >= level}
  virtual double b_minus(double level) const {
    if (level > shape_.peak) return shape_.mode;
    if (level <= 0.0) return shape_.support_lo;
    const double m = shape_.mode;
    auto g = [this, m](double s) { return pdf(m - s); };
    double hi = m - shape_.support_lo;
    if (!std::isfinite(hi)) {
      hi = numeric::bracket_decreasing(g, level, 0.0, std::sqrt(shape_.variance));
    }
    return m - numeric::bisect_decreasing(g, level, 0.0, hi);
  }

  // Points where the density is not smooth; used to split quadratures.
  virtual std::vector<double> breakpoints() const { return {shape_.mode}; }

  const DensityShape& shape() const { return shape_; }

 protected:
  DensityShape shape_;
};

inline double quadrature_mean_abs(const DensityModel& m) {
  std::vector<double> breaks = m.breakpoints();
  breaks.push_back(0.0);
  return numeric::integrate([&m](double x) { return std::abs(x) * m.pdf(x); },
                            m.shape().support_lo, m.shape().support_hi, breaks);
}

class GaussianModel final : public DensityModel {
 public:
  GaussianModel(double mu, double sigma) : DensityModel(make_shape(mu, sigma)), mu_(mu), sigma_(sigma) {}

  double pdf(double x) const override {
    const double z = (x - mu_) / sigma_;
    return shape_.peak * std::exp(-0.5 * z * z);
  }
  double derivative(double x) const override { return -(x - mu_) / (sigma_ * sigma_) * pdf(x); }
  double cdf(double x) const override {
    return 0.5 * std::erfc(-(x - mu_) / (sigma_ * std::numbers::sqrt2));
  }
  double b_plus(double level) const override { return mu_ + half_width(level); }
  double b_minus(double level) const override { return mu_ - half_width(level); }
  double sample(SharedRandomness& rng) const override { return mu_ + sigma_ * rng.normal(); }

 private:
  static DensityShape make_shape(double mu, double sigma) {
    DensityShape s;
    s.name = "gaussian";
    s.mode = mu;
    s.peak = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    s.mean = mu;
    s.variance = sigma * sigma;
    const double r = mu / sigma;
    s.mean_abs = sigma * std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * r * r) +
                 mu * std::erf(r / std::numbers::sqrt2);
    s.symmetric = true;
    return s;
  }
  double half_width(double level) const {
    if (level >= shape_.peak) return 0.0;
    if (level <= 0.0) return numeric::kInf;
    return sigma_ * std::sqrt(-2.0 * std::log(level / shape_.peak));
  }

  double mu_;
  double sigma_;
};

class LaplaceModel final : public DensityModel {
 public:
  // Scale parameter b = sigma / sqrt(2), so the variance is sigma^2.
  LaplaceModel(double mu, double sigma)
      : DensityModel(make_shape(mu, sigma)), mu_(mu), b_(sigma / std::numbers::sqrt2) {}

  double pdf(double x) const override { return shape_.peak * std::exp(-std::abs(x - mu_) / b_); }
  double derivative(double x) const override {
    if (x == mu_) return 0.0;
    return (x > mu_ ? -1.0 : 1.0) / b_ * pdf(x);
  }
  double cdf(double x) const override {
    const double z = (x - mu_) / b_;
    return z < 0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
  }
  double b_plus(double level) const override { return mu_ + half_width(level); }
  double b_minus(double level) const override { return mu_ - half_width(level); }
  double sample(SharedRandomness& rng) const override {
    const double u = rng.uniform_open();
    return u < 0.5 ? mu_ + b_ * std::log(2.0 * u) : mu_ - b_ * std::log(2.0 * (1.0 - u));
  }

 private:
  static DensityShape make_shape(double mu, double sigma) {
    const double b = sigma / std::numbers::sqrt2;
    DensityShape s;
    s.name = "laplace";
    s.mode = mu;
    s.peak = 1.0 / (2.0 * b);
    s.mean = mu;
    s.variance = sigma * sigma;
    s.mean_abs = std::abs(mu) + b * std::exp(-std::abs(mu) / b);
    s.symmetric = true;
    return s;
  }
  double half_width(double level) const {
    if (level >= shape_.peak) return 0.0;
    if (level <= 0.0) return numeric::kInf;
    return -b_ * std::log(level / shape_.peak);
  }

  double mu_;
  double b_;
};

class UniformModel final : public DensityModel {
 public:
  UniformModel(double lo, double hi) : DensityModel(make_shape(lo, hi)), lo_(lo), hi_(hi) {}

  double pdf(double x) const override { return (x >= lo_ && x <= hi_) ? shape_.peak : 0.0; }
  double derivative(double) const override { return 0.0; }
  double cdf(double x) const override { return std::clamp((x - lo_) / (hi_ - lo_), 0.0, 1.0); }
  double b_plus(double level) const override { return level > shape_.peak ? shape_.mode : hi_; }
  double b_minus(double level) const override { return level > shape_.peak ? shape_.mode : lo_; }
  double sample(SharedRandomness& rng) const override { return lo_ + (hi_ - lo_) * rng.uniform01(); }
  std::vector<double> breakpoints() const override { return {lo_, hi_}; }

 private:
  static DensityShape make_shape(double lo, double hi) {
    DensityShape s;
    s.name = "uniform";
    s.mode = 0.5 * (lo + hi);
    s.peak = 1.0 / (hi - lo);
    s.support_lo = lo;
    s.support_hi = hi;
    s.mean = s.mode;
    s.variance = (hi - lo) * (hi - lo) / 12.0;
    if (lo >= 0.0) {
      s.mean_abs = s.mode;
    } else if (hi <= 0.0) {
      s.mean_abs = -s.mode;
    } else {
      s.mean_abs = (lo * lo + hi * hi) / (2.0 * (hi - lo));
    }
    s.symmetric = true;
    s.plateau = true;
    return s;
  }

  double lo_;
  double hi_;
};

// Density, slope and cdf of S_n = U_1 + ... + U_n with U_i iid U(0, 1).
//
// The alternating sum (1/p!) sum_{k <= s} (-1)^k C(n, k) (s - k)^p loses
// digits to cancellation near the centre once n passes the mid twenties, even
// in long double. Past that point the density is tabulated from the exact
// B-spline recurrence
//   f(s; m) = [s f(s; m-1) + (m - s) f(s-1; m-1)] / (m - 1)
// on a grid of spacing 1/kIrwinHallGrid and read back by quintic Hermite
// interpolation, using f' and f'' from the same recurrence.
inline constexpr int kIrwinHallDirectMax = 24;
inline constexpr int kIrwinHallMaxN = 5000;
inline constexpr int kIrwinHallGrid = 32;

class IrwinHallKernel {
 public:
  explicit IrwinHallKernel(int n) : n_(n) {
    require(n >= 1 && n <= kIrwinHallMaxN, "irwin_hall: n must lie in [1, 5000]");
    binom_.resize(n + 1);
    binom_[0] = 1.0L;
    for (int k = 1; k <= n; ++k) binom_[k] = binom_[k - 1] * (n - k + 1) / k;
    if (n > kIrwinHallDirectMax) build_table();
  }

  int n() const { return n_; }

  double density(double s) const {
    if (!(s > 0.0 && s < n_)) return 0.0;
    if (s > 0.5 * n_) s = n_ - s;
    if (n_ <= kIrwinHallDirectMax) return static_cast<double>(alternating(s, n_ - 1));
    return interpolate(s, 0);
  }

  double slope(double s) const {
    if (!(s > 0.0 && s < n_) || n_ == 1) return 0.0;
    double sign = 1.0;
    if (s > 0.5 * n_) {
      s = n_ - s;
      sign = -1.0;
    }
    if (n_ <= kIrwinHallDirectMax) return sign * static_cast<double>(alternating(s, n_ - 2));
    return sign * interpolate(s, 1);
  }

  double cdf(double s) const {
    if (s <= 0.0) return 0.0;
    if (s >= n_) return 1.0;
    const bool upper = s > 0.5 * n_;
    const double r = upper ? n_ - s : s;
    const double lower = n_ <= kIrwinHallDirectMax ? static_cast<double>(alternating(r, n_))
                                                   : cdf_recurrence(r);
    return upper ? 1.0 - lower : lower;
  }

  // f(s; n) straight from the recurrence, O(n * s). Reference path.
  double density_recurrence(double s) const {
    if (!(s > 0.0 && s < n_)) return 0.0;
    if (s > 0.5 * n_) s = n_ - s;
    const int k = static_cast<int>(std::floor(s));
    std::vector<double> cur;
    std::vector<double> prev;
    recurrence_rows(s - k, k, cur, prev);
    return cur[k];
  }

 private:
  // (1/p!) sum_{k <= s} (-1)^k C(n, k) (s - k)^p
  long double alternating(double s, int p) const {
    long double factorial = 1.0L;
    for (int i = 2; i <= p; ++i) factorial *= i;
    numeric::CompensatedSum<long double> acc;
    const int top = std::min(n_, static_cast<int>(std::floor(s)));
    for (int k = 0; k <= top; ++k) {
      const long double base = static_cast<long double>(s) - k;
      long double term = binom_[k] * (p == 0 ? 1.0L : std::pow(base, static_cast<long double>(p)));
      acc.add((k % 2 == 0) ? term : -term);
    }
    return acc.value() / factorial;
  }

  // Runs the density recurrence for offset r in [0, 1) up to order n, keeping
  // indices 0..k_max. On return `cur` holds f(r + k; n) and `prev` holds
  // f(r + k; n - 1); `prev2`, if given, receives f(r + k; n - 2).
  void recurrence_rows(double r, int k_max, std::vector<double>& cur, std::vector<double>& prev,
                       std::vector<double>* prev2 = nullptr) const {
    cur.assign(k_max + 2, 0.0);
    prev.assign(k_max + 2, 0.0);
    cur[0] = 1.0;
    for (int m = 2; m <= n_; ++m) {
      if (prev2 != nullptr && m == n_) *prev2 = prev;
      std::swap(cur, prev);
      const int top = std::min(m - 1, k_max);
      for (int k = top; k >= 0; --k) {
        const double left = prev[k];
        const double right = k > 0 ? prev[k - 1] : 0.0;
        cur[k] = ((k + r) * left + (m - k - r) * right) / (m - 1);
      }
      for (int k = top + 1; k < static_cast<int>(cur.size()); ++k) cur[k] = 0.0;
    }
    if (n_ == 1) prev.assign(k_max + 2, 0.0);
  }

  // F(s; m) = [s F(s; m-1) + (m - s) F(s-1; m-1)] / m, for s <= n/2.
  double cdf_recurrence(double s) const {
    const int k_max = static_cast<int>(std::floor(s));
    const double r = s - k_max;
    std::vector<double> cur(k_max + 1, 1.0);
    std::vector<double> prev(k_max + 1, 1.0);
    cur[0] = r;
    for (int m = 2; m <= n_; ++m) {
      std::swap(cur, prev);
      for (int k = k_max; k >= 0; --k) {
        if (k >= m) {
          cur[k] = 1.0;
          continue;
        }
        const double left = prev[k];
        const double right = k > 0 ? prev[k - 1] : 0.0;
        cur[k] = ((k + r) * left + (m - k - r) * right) / m;
      }
    }
    return cur[k_max];
  }

  void build_table() {
    const int k_max = n_ / 2 + 2;
    const int rows = (k_max + 1) * kIrwinHallGrid;
    for (auto& t : table_) t.assign(rows, 0.0);
    std::vector<double> cur;
    std::vector<double> prev;
    std::vector<double> prev2;
    for (int j = 0; j < kIrwinHallGrid; ++j) {
      const double r = static_cast<double>(j) / kIrwinHallGrid;
      recurrence_rows(r, k_max, cur, prev, &prev2);
      for (int k = 0; k <= k_max; ++k) {
        const int i = k * kIrwinHallGrid + j;
        const double p1 = k >= 1 ? prev[k - 1] : 0.0;
        const double q1 = k >= 1 ? prev2[k - 1] : 0.0;
        const double q2 = k >= 2 ? prev2[k - 2] : 0.0;
        table_[0][i] = cur[k];
        table_[1][i] = prev[k] - p1;
        table_[2][i] = prev2[k] - 2.0 * q1 + q2;
      }
    }
  }

  // Quintic Hermite reconstruction of f (order 0) or f' (order 1).
  double interpolate(double s, int order) const {
    const double h = 1.0 / kIrwinHallGrid;
    const double pos = s * kIrwinHallGrid;
    const int i = std::min(static_cast<int>(pos), static_cast<int>(table_[0].size()) - 2);
    const double t = pos - i;
    const double y0 = table_[0][i], y1 = table_[0][i + 1];
    const double d0 = table_[1][i], d1 = table_[1][i + 1];
    const double c0 = table_[2][i], c1 = table_[2][i + 1];
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    if (order == 0) {
      const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
      const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
      const double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
      const double h3 = 0.5 * (t3 - 2 * t4 + t5);
      const double h4 = -4 * t3 + 7 * t4 - 3 * t5;
      const double h5 = 10 * t3 - 15 * t4 + 6 * t5;
      return h0 * y0 + h1 * h * d0 + h2 * h * h * c0 + h3 * h * h * c1 + h4 * h * d1 + h5 * y1;
    }
    const double g0 = -30 * t2 + 60 * t3 - 30 * t4;
    const double g1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    const double g2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4);
    const double g3 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);
    const double g4 = -12 * t2 + 28 * t3 - 15 * t4;
    const double g5 = 30 * t2 - 60 * t3 + 30 * t4;
    return (g0 * y0 + g5 * y1) / h + g1 * d0 + g4 * d1 + (g2 * c0 + g3 * c1) * h;
  }

  int n_;
  std::vector<long double> binom_;
  std::array<std::vector<double>, 3> table_;
};

class IrwinHallModel final : public DensityModel {
 public:
  IrwinHallModel(int n, double mu, double sigma)
      : DensityModel(make_shape(n, mu, sigma)),
        kernel_(n),
        n_(n),
        mu_(mu),
        half_width_(sigma * std::sqrt(3.0 * n)) {
    shape_.peak = pdf(mu);
    shape_.mean_abs = mu == 0.0 ? quadrature_mean_abs_centered() : quadrature_mean_abs(*this);
  }

  double pdf(double x) const override {
    const double jac = n_ / (2.0 * half_width_);
    return jac * kernel_.density(to_sum(x));
  }
  double derivative(double x) const override {
    const double jac = n_ / (2.0 * half_width_);
    return jac * jac * kernel_.slope(to_sum(x));
  }
  double cdf(double x) const override { return kernel_.cdf(to_sum(x)); }
  double sample(SharedRandomness& rng) const override {
    double acc = 0.0;
    for (int i = 0; i < n_; ++i) acc += 2.0 * rng.uniform01() - 1.0;
    return mu_ + half_width_ * acc / n_;
  }
  std::vector<double> breakpoints() const override {
    if (n_ > kIrwinHallDirectMax) return {mu_};
    std::vector<double> knots;
    for (int k = 0; k <= n_; ++k) knots.push_back(mu_ + half_width_ * (2.0 * k / n_ - 1.0));
    return knots;
  }

  const IrwinHallKernel& kernel() const { return kernel_; }

 private:
  static DensityShape make_shape(int n, double mu, double sigma) {
    DensityShape s;
    s.name = "irwin-hall";
    s.mode = mu;
    const double a = sigma * std::sqrt(3.0 * n);
    s.support_lo = mu - a;
    s.support_hi = mu + a;
    s.mean = mu;
    s.variance = sigma * sigma;
    s.symmetric = true;
    s.plateau = n == 1;
    return s;
  }
  double to_sum(double x) const { return 0.5 * n_ + 0.5 * n_ * (x - mu_) / half_width_; }
  double quadrature_mean_abs_centered() const {
    std::vector<double> knots;
    for (double b : breakpoints()) {
      if (b > mu_) knots.push_back(b);
    }
    return 2.0 * numeric::integrate([this](double x) { return x * pdf(x); }, mu_,
                                    shape_.support_hi, knots);
  }

  IrwinHallKernel kernel_;
  int n_;
  double mu_;
  double half_width_;
};

// Law of scale * X + shift, X ~ base, scale > 0.
class AffineModel final : public DensityModel {
 public:
  AffineModel(std::shared_ptr<const DensityModel> base, double scale, double shift)
      : DensityModel(make_shape(base->shape(), scale, shift)),
        base_(std::move(base)),
        scale_(scale),
        shift_(shift) {
    shape_.mean_abs = shift == 0.0 ? scale * base_->shape().mean_abs : quadrature_mean_abs(*this);
  }

  double pdf(double x) const override { return base_->pdf(from(x)) / scale_; }
  double derivative(double x) const override {
    return base_->derivative(from(x)) / (scale_ * scale_);
  }
  double cdf(double x) const override { return base_->cdf(from(x)); }
  double b_plus(double level) const override {
    return scale_ * base_->b_plus(level * scale_) + shift_;
  }
  double b_minus(double level) const override {
    return scale_ * base_->b_minus(level * scale_) + shift_;
  }
  double sample(SharedRandomness& rng) const override {
    return scale_ * base_->sample(rng) + shift_;
  }
  std::vector<double> breakpoints() const override {
    std::vector<double> out = base_->breakpoints();
    for (double& b : out) b = scale_ * b + shift_;
    return out;
  }

 private:
  static DensityShape make_shape(const DensityShape& b, double scale, double shift) {
    DensityShape s = b;
    s.mode = scale * b.mode + shift;
    s.peak = b.peak / scale;
    s.support_lo = scale * b.support_lo + shift;
    s.support_hi = scale * b.support_hi + shift;
    s.mean = scale * b.mean + shift;
    s.variance = scale * scale * b.variance;
    return s;
  }
  double from(double x) const { return (x - shift_) / scale_; }

  std::shared_ptr<const DensityModel> base_;
  double scale_;
  double shift_;
};

}  // namespace detail

class UnimodalPdf {
 public:
  explicit UnimodalPdf(std::shared_ptr<const detail::DensityModel> model) : model_(std::move(model)) {
    detail::require(model_ != nullptr, "UnimodalPdf: null model");
  }

  double pdf(double x) const { return model_->pdf(x); }
  double operator()(double x) const { return model_->pdf(x); }
  double derivative(double x) const { return model_->derivative(x); }
  double cdf(double x) const { return model_->cdf(x); }
  double b_minus(double level) const { return model_->b_minus(level); }
  double b_plus(double level) const { return model_->b_plus(level); }
  double sample(SharedRandomness& rng) const { return model_->sample(rng); }

  const std::string& name() const { return model_->shape().name; }
  double mode() const { return model_->shape().mode; }
  double peak() const { return model_->shape().peak; }
  double support_lo() const { return model_->shape().support_lo; }
  double support_hi() const { return model_->shape().support_hi; }
  double mean() const { return model_->shape().mean; }
  double variance() const { return model_->shape().variance; }
  double stddev() const { return std::sqrt(model_->shape().variance); }
  double mean_abs() const { return model_->shape().mean_abs; }
  bool symmetric() const { return model_->shape().symmetric; }
  bool has_plateau() const { return model_->shape().plateau; }
  std::vector<double> breakpoints() const { return model_->breakpoints(); }

  const std::shared_ptr<const detail::DensityModel>& model() const { return model_; }

 private:
  std::shared_ptr<const detail::DensityModel> model_;
};

// IH(n, mu, sigma^2): mean of n iid U(-a, a) plus mu, a = sigma * sqrt(3n).
class IrwinHallPdf : public UnimodalPdf {
 public:
  IrwinHallPdf(int n, double mu, double sigma)
      : UnimodalPdf(std::make_shared<const detail::IrwinHallModel>(n, mu, sigma)),
        n_(n),
        mu_(mu),
        sigma_(sigma) {}

  int n() const { return n_; }
  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  double half_width() const { return sigma_ * std::sqrt(3.0 * n_); }

 private:
  int n_;
  double mu_;
  double sigma_;
};

inline UnimodalPdf gaussian(double sigma, double mu = 0.0) {
  detail::require_positive(sigma, "gaussian: sigma");
  detail::require_finite(mu, "gaussian: mu");
  return UnimodalPdf(std::make_shared<const detail::GaussianModel>(mu, sigma));
}

// Laplace with standard deviation sigma (scale sigma / sqrt(2)).
inline UnimodalPdf laplace(double sigma, double mu = 0.0) {
  detail::require_positive(sigma, "laplace: sigma");
  detail::require_finite(mu, "laplace: mu");
  return UnimodalPdf(std::make_shared<const detail::LaplaceModel>(mu, sigma));
}

inline UnimodalPdf uniform(double lo, double hi) {
  detail::require_finite(lo, "uniform: lo");
  detail::require_finite(hi, "uniform: hi");
  detail::require(lo < hi, "uniform: lo must be below hi");
  return UnimodalPdf(std::make_shared<const detail::UniformModel>(lo, hi));
}

inline IrwinHallPdf irwin_hall(int n, double mu, double sigma) {
  detail::require_positive(sigma, "irwin_hall: sigma");
  detail::require_finite(mu, "irwin_hall: mu");
  return IrwinHallPdf(n, mu, sigma);
}

// Law of scale * X + shift for X ~ f.
inline UnimodalPdf affine(const UnimodalPdf& f, double scale, double shift = 0.0) {
  detail::require_positive(scale, "affine: scale");
  detail::require_finite(shift, "affine: shift");
  return UnimodalPdf(std::make_shared<const detail::AffineModel>(f.model(), scale, shift));
}

enum class LayerScheme { kDirect, kShifted };

inline const char* to_string(LayerScheme s) {
  return s == LayerScheme::kDirect ? "direct" : "shifted";
}

// Density of the layer height used by a layered quantizer, supported on
// (0, peak):
//   direct   f_D(x) = b+(x) - b-(x)
//   shifted  f_W(x) = b+(x) - b-(peak - x)
// f_W is U-shaped rather than unimodal, hence a separate type.
class LayerDensity {
 public:
  LayerDensity(UnimodalPdf base, LayerScheme scheme) : base_(std::move(base)), scheme_(scheme) {}

  double pdf(double x) const {
    if (!(x > 0.0 && x < base_.peak())) return 0.0;
    return step(x);
  }
  double operator()(double x) const { return pdf(x); }

  // Step size at height x; callers guarantee x in (0, peak).
  double step(double x) const {
    if (scheme_ == LayerScheme::kDirect) return base_.b_plus(x) - base_.b_minus(x);
    return base_.b_plus(x) - base_.b_minus(base_.peak() - x);
  }

  // Reconstruction offset at height x.
  double center(double x) const {
    if (scheme_ == LayerScheme::kDirect) return 0.5 * (base_.b_plus(x) + base_.b_minus(x));
    return 0.5 * (base_.b_plus(x) + base_.b_minus(base_.peak() - x));
  }

  double cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= base_.peak()) return 1.0;
    return numeric::integrate([this](double y) { return pdf(y); }, 0.0, x, {});
  }

  // One draw of the height, without inverting the cdf: Z ~ f and a uniform
  // height under f(Z). For the shifted scheme the height is reflected to
  // peak - V f(Z) when Z falls left of the mode.
  double sample(SharedRandomness& rng) const {
    const double z = base_.sample(rng);
    const double v = rng.uniform_open_closed();
    const double h = v * base_.pdf(z);
    if (scheme_ == LayerScheme::kShifted && z < base_.mode()) return base_.peak() - h;
    return h;
  }

  const UnimodalPdf& base() const { return base_; }
  LayerScheme scheme() const { return scheme_; }
  double upper() const { return base_.peak(); }

 private:
  UnimodalPdf base_;
  LayerScheme scheme_;
};

namespace detail {
inline void require_layerable(const UnimodalPdf& f, const char* who) {
  if (!std::isfinite(f.peak()) || !(f.peak() > 0.0)) {
    throw InvalidArgument(std::string(who) + ": peak must be finite");
  }
  if (f.has_plateau()) {
    throw InvalidArgument(std::string(who) + ": density has a flat top; layer density degenerates");
  }
}
}  // namespace detail

inline LayerDensity layered_pdf(const UnimodalPdf& f) {
  detail::require_layerable(f, "layered_pdf");
  return LayerDensity(f, LayerScheme::kDirect);
}

inline LayerDensity shifted_pdf(const UnimodalPdf& f) {
  detail::require_layerable(f, "shifted_pdf");
  return LayerDensity(f, LayerScheme::kShifted);
}

}  // namespace exactq

#endif  // EXACTQ_DISTRIBUTIONS_HPP_
