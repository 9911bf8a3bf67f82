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

// Differential-privacy calibration and the subsampled individual Gaussian
// mechanism (SIGM).
//
// SIGM, per coordinate j: client i takes part with probability gamma
// (B_i(j) = 1); with n~ = sum_i B_i(j), each participant sends
// M = encode(x_i(j) sqrt(n~)) through a shifted layered quantizer with noise
// N(0, (sigma gamma n)^2), and the server returns
//   Y(j) = (gamma n sqrt(n~))^-1 sum_{i : B_i(j) = 1} decode(M_i).
// Conditional on B, Y(j) - (gamma n)^-1 sum_{B_i(j) = 1} x_i(j) ~ N(0, sigma^2).
// With n~ = 0 the server returns a N(0, sigma^2) draw.
//
// Shared-stream layout under the round root R:
//   selection B      R.substream(0), drawn client-major
//   states S_i(j)    derive_client_stream(R.substream(1), i, j)
//   empty-column     R.substream(2).substream(j)
//   baseline dither  derive_client_stream(R.substream(3), i, j)

#ifndef EXACTQ_PRIVACY_HPP_
#define EXACTQ_PRIVACY_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "exactq/coding.hpp"
#include "exactq/distributions.hpp"
#include "exactq/error.hpp"
#include "exactq/quantizers.hpp"
#include "exactq/random.hpp"

namespace exactq {

using Matrix = std::vector<std::vector<double>>;

struct PrivacyParams {
  double epsilon = 1.0;
  double delta = 1e-5;
  double clip_c = 1.0;
  double gamma_sub = 1.0;
  int n_clients = 1;
  int dim = 1;

  void validate() const {
    detail::require_positive(epsilon, "epsilon");
    detail::require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    detail::require_positive(clip_c, "clip_c");
    detail::require(gamma_sub > 0.0 && gamma_sub <= 1.0, "gamma_sub must lie in (0, 1]");
    detail::require(n_clients >= 1 && dim >= 1, "n_clients and dim must be positive");
  }
};

// sigma = sensitivity * sqrt(2 ln(1.25 / delta)) / epsilon.
inline double gaussian_mechanism_sigma(double epsilon, double delta, double sensitivity) {
  detail::require_positive(epsilon, "gaussian_mechanism_sigma: epsilon");
  detail::require(delta > 0.0 && delta < 1.0, "gaussian_mechanism_sigma: delta must lie in (0, 1)");
  detail::require_positive(sensitivity, "gaussian_mechanism_sigma: sensitivity");
  return sensitivity * std::sqrt(2.0 * std::log(1.25 / delta)) / epsilon;
}

// Minimal step of the shifted quantizer for N(0, s^2): 2 s sqrt(ln 4).
inline double gaussian_eta(double s) { return 2.0 * s * std::sqrt(std::log(4.0)); }

struct SigmSharedState {
  std::vector<std::vector<std::uint8_t>> selection;  // [client][coordinate]
  std::vector<int> n_selected;                       // per coordinate
};

inline SigmSharedState sigm_shared_state(int n, int d, double gamma_sub,
                                         const SharedRandomness& root) {
  detail::require(n >= 1 && d >= 1, "sigm_shared_state: n and d must be positive");
  detail::require(gamma_sub >= 0.0 && gamma_sub <= 1.0, "sigm_shared_state: gamma must lie in [0, 1]");
  SigmSharedState st;
  st.selection.assign(n, std::vector<std::uint8_t>(d, 0));
  st.n_selected.assign(d, 0);
  SharedRandomness rng = root.substream(0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      if (rng.bernoulli(gamma_sub)) {
        st.selection[i][j] = 1;
        ++st.n_selected[j];
      }
    }
  }
  return st;
}

struct SigmRound {
  std::vector<double> estimate;                    // Y
  std::vector<double> noise;                       // Y - (gamma n)^-1 sum_{selected} x
  std::vector<std::vector<std::int64_t>> messages; // [client][coordinate], 0 if unselected
  std::vector<double> bits_variable;               // per client, gamma code
  std::vector<double> bits_fixed;                  // per client, fixed-length code
  SigmSharedState shared;
};

// One SIGM round. `clip_c` bounds |x_i(j)| and sets the fixed-length
// accounting range t = 2 c sqrt(n~).
inline SigmRound sigm_round(const Matrix& x, double sigma, double gamma_sub, double clip_c,
                            const SharedRandomness& root) {
  detail::require(!x.empty() && !x[0].empty(), "sigm_round: empty data");
  detail::require_positive(sigma, "sigm_round: sigma");
  detail::require(gamma_sub > 0.0 && gamma_sub <= 1.0, "sigm_round: gamma must lie in (0, 1]");
  const int n = static_cast<int>(x.size());
  const int d = static_cast<int>(x[0].size());
  SigmRound out;
  out.shared = sigm_shared_state(n, d, gamma_sub, root);
  out.estimate.assign(d, 0.0);
  out.noise.assign(d, 0.0);
  out.messages.assign(n, std::vector<std::int64_t>(d, 0));
  out.bits_variable.assign(n, 0.0);
  out.bits_fixed.assign(n, 0.0);

  const double scale = gamma_sub * n;
  const UnimodalPdf f = gaussian(sigma * scale);
  const LayerDensity layer(f, LayerScheme::kShifted);
  const double eta = gaussian_eta(sigma * scale);
  const SharedRandomness states = root.substream(1);

  for (int j = 0; j < d; ++j) {
    const int nt = out.shared.n_selected[j];
    if (nt == 0) {
      SharedRandomness rng = root.substream(2).substream(j);
      out.estimate[j] = sigma * rng.normal();
      out.noise[j] = out.estimate[j];
      continue;
    }
    const double root_nt = std::sqrt(static_cast<double>(nt));
    const int fixed = fixed_length_bits_for_eta(eta, 2.0 * clip_c * root_nt);
    double decoded = 0.0;
    double selected_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!out.shared.selection[i][j]) continue;
      SharedRandomness rng = derive_client_stream(states, i, j);
      const LayeredState s = sample_state(layer, rng);
      const std::int64_t m = layered_encode(x[i][j] * root_nt, s);
      out.messages[i][j] = m;
      decoded += layered_decode(m, s);
      selected_sum += x[i][j];
      out.bits_variable[i] += message_bits(m);
      out.bits_fixed[i] += fixed;
    }
    out.estimate[j] = decoded / (scale * root_nt);
    out.noise[j] = out.estimate[j] - selected_sum / scale;
  }
  return out;
}

// Expected fixed-length bits per client: gamma d ceil(log2(2 + t / eta)) with
// t = 2 c sqrt(gamma n) and eta = 2 sigma gamma n sqrt(ln 4).
inline double sigm_bits(const PrivacyParams& p, double sigma) {
  detail::require_positive(sigma, "sigm_bits: sigma");
  if (p.gamma_sub <= 0.0) return 0.0;
  const double nt = p.gamma_sub * p.n_clients;
  const double eta = gaussian_eta(sigma * nt);
  return p.gamma_sub * p.dim * fixed_length_bits_for_eta(eta, 2.0 * p.clip_c * std::sqrt(nt));
}

struct BaselineRound {
  std::vector<double> estimate;
  std::vector<double> bits;  // per client
};

// Comparator: the same coordinate subsampling, subtractive dithering of each
// selected x_i(j) with step t / 2^b (t = 2c), and additive Gaussian noise
// supplied by the caller (one N(0, sigma^2) draw per coordinate). No budget
// means no quantization.
inline BaselineRound baseline_round(const Matrix& x, const SigmSharedState& shared, double gamma_sub,
                                    double clip_c, std::optional<int> bits_budget,
                                    std::span<const double> gaussian_noise,
                                    const SharedRandomness& root) {
  detail::require(!x.empty(), "baseline_round: empty data");
  const int n = static_cast<int>(x.size());
  const int d = static_cast<int>(x[0].size());
  detail::require(static_cast<int>(gaussian_noise.size()) == d, "baseline_round: noise length");
  if (bits_budget) detail::require(*bits_budget >= 1, "baseline_round: budget must be at least 1 bit");
  const double w = bits_budget ? 2.0 * clip_c / std::ldexp(1.0, *bits_budget) : 0.0;
  const SharedRandomness dithers = root.substream(3);
  BaselineRound out;
  out.estimate.assign(d, 0.0);
  out.bits.assign(n, 0.0);
  const double scale = gamma_sub * n;
  for (int j = 0; j < d; ++j) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!shared.selection[i][j]) continue;
      if (bits_budget) {
        SharedRandomness rng = derive_client_stream(dithers, i, j);
        const double s = rng.centered_uniform();
        acc += dither_decode(dither_encode(x[i][j], s, w), s, w);
        out.bits[i] += *bits_budget;
      } else {
        acc += x[i][j];
      }
    }
    out.estimate[j] = (shared.n_selected[j] > 0 ? acc / scale : 0.0) + gaussian_noise[j];
  }
  return out;
}

// Single-vector form: dither each coordinate with step t / 2^b, then add
// N(0, sigma^2).
inline std::vector<double> baseline_dither_plus_gaussian(std::span<const double> x, int bits_budget,
                                                         double t, double sigma,
                                                         SharedRandomness& rng) {
  detail::require(bits_budget >= 1, "baseline_dither_plus_gaussian: budget must be at least 1 bit");
  detail::require_positive(t, "baseline_dither_plus_gaussian: t");
  detail::require(sigma >= 0.0, "baseline_dither_plus_gaussian: sigma must be non-negative");
  const double w = t / std::ldexp(1.0, bits_budget);
  std::vector<double> y(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double s = rng.centered_uniform();
    y[j] = dither_decode(dither_encode(x[j], s, w), s, w) + sigma * rng.normal();
  }
  return y;
}

}  // namespace exactq

#endif  // EXACTQ_PRIVACY_HPP_
