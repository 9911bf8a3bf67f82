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

// Entropy and communication-cost calculators. Everything is in bits.

#ifndef EXACTQ_BOUNDS_HPP_
#define EXACTQ_BOUNDS_HPP_

#include <cmath>
#include <string>
#include <utility>

#include "exactq/aggregate.hpp"
#include "exactq/distributions.hpp"
#include "exactq/error.hpp"
#include "exactq/numeric.hpp"
#include "exactq/quantizers.hpp"
#include "exactq/random.hpp"
#include "exactq/stats.hpp"

namespace exactq {

namespace detail {
inline double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }
}  // namespace detail

// h(f) = -int f log2 f.
inline double differential_entropy(const UnimodalPdf& f) {
  auto integrand = [&f](double x) { return detail::plogp(f.pdf(x)); };
  const double h = numeric::integrate(integrand, f.support_lo(), f.support_hi(), f.breakpoints(), 1e-12);
  if (!std::isfinite(h)) throw NumericError("differential_entropy: integral diverged");
  return h;
}

// Entropy of the layer height, h(D_Z) or h(W_Z).
inline double layer_entropy(const LayerDensity& layer) {
  auto integrand = [&layer](double x) { return detail::plogp(layer.pdf(x)); };
  std::vector<double> breaks;
  if (layer.scheme() == LayerScheme::kShifted) breaks.push_back(0.5 * layer.upper());
  const double h = numeric::integrate(integrand, 0.0, layer.upper(), breaks, 1e-12);
  if (!std::isfinite(h)) throw NumericError("layer_entropy: integral diverged");
  return h;
}

struct LayeredEntropyPair {
  double direct;   // h(D_Z)
  double shifted;  // h(W_Z)
};

inline LayeredEntropyPair layered_entropy_pair(const UnimodalPdf& f) {
  return {layer_entropy(LayerDensity(f, LayerScheme::kDirect)),
          layer_entropy(LayerDensity(f, LayerScheme::kShifted))};
}

// log2 t + h(D_Z): lower bound on H(M|S) for any AINQ quantizer with error f
// and inputs uniform on an interval of length t.
inline double entropy_lower_bound(const UnimodalPdf& f, double t) {
  detail::require_positive(t, "entropy_lower_bound: t");
  return std::log2(t) + layer_entropy(LayerDensity(f, LayerScheme::kDirect));
}

// log2 t + 8 log2(e) sd / t + h(layer).
inline double entropy_upper_bound(LayerScheme scheme, const UnimodalPdf& f, double t) {
  detail::require_positive(t, "entropy_upper_bound: t");
  return std::log2(t) + 8.0 * numeric::kLog2E * f.stddev() / t +
         layer_entropy(LayerDensity(f, scheme));
}

// Bound on the excess of the shifted quantizer over the lower bound.
inline double gap_bound_shifted(const UnimodalPdf& f, double t) {
  detail::require(f.symmetric(), "gap_bound_shifted: f must be symmetric");
  detail::require_positive(t, "gap_bound_shifted: t");
  return 8.0 * numeric::kLog2E * f.stddev() / t + 2.0;
}

// H(M | S = s) in closed form for X ~ U(0, t). With y = X / step + u the
// message is floor(y + 1/2); y + 1/2 is uniform on [c, c + l) with
// c = u + 1/2 and l = t / step, so each message has probability equal to its
// overlap with that interval divided by l.
inline double conditional_entropy_given_state(double step, double u, double t) {
  detail::require_positive(step, "conditional_entropy: step");
  if (t <= 0.0) return 0.0;
  const double len = t / step;
  const double c = u + 0.5;
  const double end = c + len;
  const double first = std::floor(c);
  const double last = std::floor(end);
  if (first == last) return 0.0;
  const double p_first = (first + 1.0 - c) / len;
  const double p_last = (end - last) / len;
  const double full = last - first - 1.0;
  return detail::plogp(p_first) + detail::plogp(p_last) + full * std::log2(len) / len;
}

struct Estimate {
  double mean;
  double standard_error;
};

// Average of H(M | S) over `trials` state draws.
inline Estimate conditional_entropy_mc(LayerScheme scheme, const UnimodalPdf& f, double t,
                                       int trials, SharedRandomness& rng) {
  detail::require(trials >= 2, "conditional_entropy_mc: need at least two trials");
  const LayerDensity layer(f, scheme);
  stats::RunningStats acc;
  for (int i = 0; i < trials; ++i) {
    const LayeredState s = sample_state(layer, rng);
    acc.add(conditional_entropy_given_state(s.step, s.u, t));
  }
  return {acc.mean(), acc.standard_error()};
}

struct EntropyReport {
  std::string scheme;  // e.g. "direct-gaussian"
  double t;
  double sigma;
  double lower;
  double measured;
  double standard_error;
  double upper;
};

inline EntropyReport entropy_report(LayerScheme scheme, const UnimodalPdf& f, double t, int trials,
                                    SharedRandomness& rng) {
  const Estimate e = conditional_entropy_mc(scheme, f, t, trials, rng);
  return {std::string(to_string(scheme)) + "-" + f.name(),
          t,
          f.stddev(),
          entropy_lower_bound(f, t),
          e.mean,
          e.standard_error,
          entropy_upper_bound(scheme, f, t)};
}

// -(1 - lambda)(L f(0) + log2(e L (g(0) - lambda f(0)) / (2 (1 - lambda)))),
// a lower bound on h_M(g || f); zero when lambda = 1.
inline double hm_lower_bound(const UnimodalPdf& f, const UnimodalPdf& g, double lambda) {
  detail::require(lambda >= 0.0 && lambda <= 1.0, "hm_lower_bound: lambda must lie in [0, 1]");
  detail::require(std::isfinite(f.support_hi()), "hm_lower_bound: f needs bounded support");
  if (lambda == 1.0) return 0.0;
  const double width = 2.0 * f.support_hi();
  const double f0 = f.pdf(0.0);
  const double g0 = g.pdf(0.0);
  const double inner = std::numbers::e * width * (g0 - lambda * f0) / (2.0 * (1.0 - lambda));
  return -(1.0 - lambda) * (width * f0 + std::log2(inner));
}

inline double hm_lower_bound(const Decomposer& d) {
  return hm_lower_bound(d.base(), d.target(), d.lambda());
}

// Upper bound on h_M(g || f) via differential entropies.
inline double hm_entropy_upper_bound(const UnimodalPdf& f, const UnimodalPdf& g) {
  return differential_entropy(g) - differential_entropy(f);
}

// Expected bits per client of the aggregate mechanism with n clients, noise
// sigma * q and inputs in [-t/2, t/2]:
//   -h_M + log2(t / w) + (3 w log2 e / t) E_Q|Z| / E_P|Z| + 1,  w = 2 sigma sqrt(3n),
// with h_M replaced by the supplied lower bound.
inline double thm1_cost_bound(int n, double sigma, double t, double hm_lower,
                              const UnimodalPdf& q = gaussian(1.0)) {
  detail::require_positive(t, "thm1_cost_bound: t");
  const double w = irwin_hall_step(n, sigma);
  const double ratio = q.mean_abs() / irwin_hall(n, 0.0, 1.0).mean_abs();
  return -hm_lower + std::log2(t / w) + 3.0 * w * numeric::kLog2E / t * ratio + 1.0;
}

}  // namespace exactq

#endif  // EXACTQ_BOUNDS_HPP_
