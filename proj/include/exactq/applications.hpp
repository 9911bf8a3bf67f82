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

// Exact-Gaussian compression used downstream: a compressor with a known
// error variance, variance-compensated Langevin sampling (QLSD*) on a
// quadratic federated target, and the randomized-smoothing perturbation.

#ifndef EXACTQ_APPLICATIONS_HPP_
#define EXACTQ_APPLICATIONS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "exactq/distributions.hpp"
#include "exactq/error.hpp"
#include "exactq/privacy.hpp"
#include "exactq/quantizers.hpp"
#include "exactq/random.hpp"
#include "exactq/stats.hpp"

namespace exactq {

struct CompressedVector {
  std::vector<double> y;
  std::vector<std::int64_t> messages;
  double variance = 0.0;  // per-coordinate error variance of y - x
  double scale = 1.0;     // the input was divided by this before quantizing
};

namespace detail {

inline CompressedVector compress_scaled(std::span<const double> x, double scale, double sigma,
                                        SharedRandomness& rng) {
  CompressedVector out;
  out.scale = scale;
  out.y.assign(x.begin(), x.end());
  out.messages.assign(x.size(), 0);
  if (sigma == 0.0 || scale == 0.0) return out;
  const LayerDensity layer(gaussian(sigma), LayerScheme::kShifted);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const LayeredState s = sample_state(layer, rng);
    out.messages[j] = layered_encode(x[j] / scale, s);
    out.y[j] = layered_decode(out.messages[j], s) * scale;
  }
  out.variance = sigma * sigma * scale * scale;
  return out;
}

}  // namespace detail

// y - x ~ N(0, variance I).
inline CompressedVector exact_noise_compressor(std::span<const double> x, double variance,
                                               SharedRandomness& rng) {
  detail::require(variance >= 0.0 && std::isfinite(variance),
                  "exact_noise_compressor: variance must be finite and >= 0");
  return detail::compress_scaled(x, 1.0, std::sqrt(variance), rng);
}

// Noise level of a b-bit shifted quantizer on [-1, 1]: the support bound
// 2 + t / eta equals 2^b at t = 2, so eta = 2 / (2^b - 2) and
// sigma_b = eta / (2 sqrt(ln 4)).
inline double sigma_for_bits(int bits) {
  detail::require(bits >= 2 && bits <= 52, "sigma_for_bits: bits must lie in [2, 52]");
  const double eta = 2.0 / (std::ldexp(1.0, bits) - 2.0);
  return eta / (2.0 * std::sqrt(std::log(4.0)));
}

// b-bit form: x is divided by its max norm, quantized with N(0, sigma_b^2),
// and rescaled, so the reported variance is sigma_b^2 |x|_inf^2. A zero
// vector is returned unchanged with variance 0.
inline CompressedVector exact_noise_compressor_bits(std::span<const double> x, int bits,
                                                    SharedRandomness& rng) {
  const double sigma = sigma_for_bits(bits);
  double norm = 0.0;
  for (double v : x) {
    detail::require_finite(v, "exact_noise_compressor_bits: x");
    norm = std::max(norm, std::abs(v));
  }
  return detail::compress_scaled(x, norm, sigma, rng);
}

// Toy federated target: client i holds observations y_{i,1..N_i} with
// potential U_i(theta) = sum_j |theta - y_{i,j}|^2 / 2.
struct LangevinConfig {
  double step_gamma = 5e-4;
  int n_clients = 5;
  int dim = 10;
  int points_per_client = 20;
  int bits_b = 8;            // 0 disables compression
  int burn_in = 10000;
  int n_samples = 10000;
  std::vector<Matrix> data;  // [client][point][coordinate]

  int total_points() const {
    int total = 0;
    for (const auto& c : data) total += static_cast<int>(c.size());
    return total;
  }

  // The discretized chain contracts when gamma N < 2.
  void validate() const {
    detail::require_positive(step_gamma, "LangevinConfig: step_gamma");
    detail::require(static_cast<int>(data.size()) == n_clients, "LangevinConfig: data/client count");
    detail::require(total_points() > 0, "LangevinConfig: no data");
    detail::require(step_gamma * total_points() < 2.0, "LangevinConfig: step_gamma too large for stability");
    detail::require(bits_b == 0 || bits_b >= 2, "LangevinConfig: bits_b must be 0 or at least 2");
    detail::require(burn_in >= 0 && n_samples >= 0, "LangevinConfig: negative iteration counts");
  }
};

// y_{i,j} ~ N(mu_i, I) with mu_i ~ N(0, 25 I).
inline std::vector<Matrix> make_langevin_data(int n_clients, int dim, int points_per_client,
                                              SharedRandomness& rng) {
  std::vector<Matrix> data(n_clients);
  for (int i = 0; i < n_clients; ++i) {
    std::vector<double> mu(dim);
    for (double& m : mu) m = 5.0 * rng.normal();
    data[i].assign(points_per_client, std::vector<double>(dim));
    for (auto& y : data[i]) {
      for (int k = 0; k < dim; ++k) y[k] = mu[k] + rng.normal();
    }
  }
  return data;
}

struct GaussianPosterior {
  std::vector<double> mean;
  double variance;  // per coordinate
};

// The posterior is N(ybar, I / N) with ybar the mean of all observations.
inline GaussianPosterior langevin_posterior(const LangevinConfig& cfg) {
  const int total = cfg.total_points();
  detail::require(total > 0, "langevin_posterior: no data");
  GaussianPosterior p{std::vector<double>(cfg.dim, 0.0), 1.0 / total};
  for (const auto& client : cfg.data) {
    for (const auto& y : client) {
      for (int k = 0; k < cfg.dim; ++k) p.mean[k] += y[k];
    }
  }
  for (double& m : p.mean) m /= total;
  return p;
}

struct ChainState {
  std::vector<double> theta;
  std::int64_t iteration = 0;
  double last_beta2 = 0.0;
};

// beta^2 = max(0, 2 gamma - gamma^2 sum_i v_i).
inline double qlsd_beta2(double step_gamma, std::span<const double> variances) {
  double total = 0.0;
  for (double v : variances) total += v;
  const double b2 = std::max(0.0, 2.0 * step_gamma - step_gamma * step_gamma * total);
  if (!std::isfinite(b2)) throw NumericError("qlsd_beta2: non-finite value");
  return b2;
}

// One QLSD* step with full participation. Client i compresses
// H_i(theta) - H_i(theta*) = N_i (theta - theta*) with theta* = ybar; the
// server sums, draws the compensating noise and updates theta.
inline ChainState qlsd_star_step(const ChainState& state, const LangevinConfig& cfg,
                                 std::span<const double> anchor, SharedRandomness& shared) {
  detail::require(static_cast<int>(state.theta.size()) == cfg.dim, "qlsd_star_step: theta length");
  std::vector<double> g(cfg.dim, 0.0);
  std::vector<double> variances(cfg.n_clients, 0.0);
  std::vector<double> h(cfg.dim);
  for (int i = 0; i < cfg.n_clients; ++i) {
    const double ni = static_cast<double>(cfg.data[i].size());
    for (int k = 0; k < cfg.dim; ++k) h[k] = ni * (state.theta[k] - anchor[k]);
    if (cfg.bits_b == 0) {
      for (int k = 0; k < cfg.dim; ++k) g[k] += h[k];
      continue;
    }
    const CompressedVector c = exact_noise_compressor_bits(h, cfg.bits_b, shared);
    for (int k = 0; k < cfg.dim; ++k) g[k] += c.y[k];
    variances[i] = c.variance;
  }
  ChainState next;
  next.iteration = state.iteration + 1;
  next.last_beta2 = qlsd_beta2(cfg.step_gamma, variances);
  const double beta = std::sqrt(next.last_beta2);
  next.theta.resize(cfg.dim);
  for (int k = 0; k < cfg.dim; ++k) {
    next.theta[k] = state.theta[k] - cfg.step_gamma * g[k] + beta * shared.normal();
    detail::require_finite(next.theta[k], "qlsd_star_step: theta");
  }
  return next;
}

struct LangevinRun {
  std::vector<double> sample_mean;
  std::vector<double> sample_variance;
  std::vector<double> running_mse;  // |running mean - posterior mean|^2 after each sample
  GaussianPosterior posterior;
};

inline LangevinRun qlsd_star_run(const LangevinConfig& cfg, SharedRandomness& shared,
                                 std::span<const double> theta0 = {}) {
  cfg.validate();
  LangevinRun run;
  run.posterior = langevin_posterior(cfg);
  ChainState st;
  st.theta = theta0.empty() ? std::vector<double>(cfg.dim, 0.0)
                            : std::vector<double>(theta0.begin(), theta0.end());
  for (int k = 0; k < cfg.burn_in; ++k) st = qlsd_star_step(st, cfg, run.posterior.mean, shared);
  std::vector<stats::RunningStats> acc(cfg.dim);
  run.running_mse.reserve(cfg.n_samples);
  for (int k = 0; k < cfg.n_samples; ++k) {
    st = qlsd_star_step(st, cfg, run.posterior.mean, shared);
    double mse = 0.0;
    for (int j = 0; j < cfg.dim; ++j) {
      acc[j].add(st.theta[j]);
      const double e = acc[j].mean() - run.posterior.mean[j];
      mse += e * e;
    }
    run.running_mse.push_back(mse);
  }
  for (const auto& a : acc) {
    run.sample_mean.push_back(a.mean());
    run.sample_variance.push_back(a.count() > 1 ? a.variance() : 0.0);
  }
  return run;
}

// theta + N(0, sigma_s^2 I), realized by a shifted layered quantizer so the
// perturbed point doubles as the compressed message.
inline std::vector<double> smoothing_perturb(std::span<const double> theta, double sigma_s,
                                             SharedRandomness& rng) {
  detail::require(sigma_s >= 0.0 && std::isfinite(sigma_s), "smoothing_perturb: sigma_s must be >= 0");
  return detail::compress_scaled(theta, 1.0, sigma_s, rng).y;
}

}  // namespace exactq

#endif  // EXACTQ_APPLICATIONS_HPP_
