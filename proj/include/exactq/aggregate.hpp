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

// Homomorphic n-client mechanisms.
//
// Irwin-Hall mechanism: every client dithers with step w = 2 sigma sqrt(3n)
// and the server decodes the mean from the sum of messages alone; the error
// is IH(n, 0, sigma^2).
//
// Aggregate mechanism: a shared random pair (A, B) with A Z + B ~ Q whenever
// Z ~ IH(n, 0, 1) turns that error into sigma * Q. Clients encode
// round(x / (A w) + S_i); the server returns (A w / n)(sum M - sum S) + B sigma.
//
// Shared-stream layout for coordinate j, with T_j = root.substream(j):
//   (A, B)  from T_j.substream(0)
//   S_i     from T_j.substream(i + 1), client i in [0, n)
//
// A is occasionally tiny (the uniform-splitting loop multiplies it by a
// factor below 1/2 per round), and then x / (A w) no longer fits in 64 bits.
// Simulation paths therefore carry messages as integer-valued long doubles;
// to_wire() converts to the 64-bit wire form and throws if it does not fit.

#ifndef EXACTQ_AGGREGATE_HPP_
#define EXACTQ_AGGREGATE_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "exactq/distributions.hpp"
#include "exactq/error.hpp"
#include "exactq/numeric.hpp"
#include "exactq/quantizers.hpp"
#include "exactq/random.hpp"

namespace exactq {

struct ScaleShift {
  double a = 1.0;
  double b = 0.0;
};

inline double irwin_hall_step(int n, double sigma) {
  detail::require(n >= 1, "irwin_hall_step: n must be positive");
  detail::require_positive(sigma, "irwin_hall_step: sigma");
  return 2.0 * sigma * std::sqrt(3.0 * n);
}

inline std::int64_t irwin_hall_encode(double x, double s, double w) { return dither_encode(x, s, w); }

// Mean estimate (w / n)(sum_m - sum_s).
inline double irwin_hall_decode(std::int64_t sum_m, double sum_s, int n, double w) {
  detail::require(n >= 1, "irwin_hall_decode: n must be positive");
  return w / n * (static_cast<double>(sum_m) - sum_s);
}

inline constexpr int kDecomposeUnifMaxIterations = 10000;

// Writes U(-1/2, 1/2) as a X + b with X ~ f, for f symmetric and unimodal
// on [-1/2, 1/2].
inline ScaleShift decompose_unif(const UnimodalPdf& f, SharedRandomness& rng) {
  const double f0 = f.pdf(0.0);
  ScaleShift out;
  for (int it = 0; it < kDecomposeUnifMaxIterations; ++it) {
    const double u = rng.centered_uniform();
    const double v = rng.uniform01();
    if (v * f0 <= f.pdf(u)) return out;
    // Right-branch inverse: inf{x >= 0 : f(x) <= v f(0)}.
    const double s = numeric::bisect_decreasing([&f](double x) { return f.pdf(x); }, v * f0, 0.0, 0.5);
    const double sign = u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
    out.b += out.a * sign * (s + 0.5) / 2.0;
    out.a *= 0.5 - s;
  }
  throw NumericError("decompose_unif: iteration cap exceeded");
}

// inf over x in (0, L/2) with f'(x) < 0 of g'(x) / f'(x).
inline double lambda_mixture(const UnimodalPdf& f, const UnimodalPdf& g) {
  const double half = f.support_hi();
  detail::require(std::isfinite(half) && half > 0.0, "lambda_mixture: f needs bounded support");
  auto ratio = [&f, &g](double x) {
    const double df = f.derivative(x);
    if (!(df < 0.0)) return numeric::kInf;
    return g.derivative(x) / df;
  };
  const double lo = half * 1e-4;
  const double hi = half * (1.0 - 1e-4);
  const numeric::Minimum m = numeric::grid_then_golden(ratio, lo, hi, 2000);
  if (!std::isfinite(m.value)) throw NumericError("lambda_mixture: f has no decreasing branch");
  return std::clamp(m.value * (1.0 - 1e-6), 0.0, 1.0);
}

// Draws (A, B) such that A X + B ~ g when X ~ f. f is symmetric about 0 with
// support [-L/2, L/2]; g is symmetric about 0.
class Decomposer {
 public:
  Decomposer(UnimodalPdf f, UnimodalPdf g, std::optional<double> lambda = std::nullopt)
      : f_(std::move(f)), g_(std::move(g)), f_unit_(f_) {
    detail::require(f_.symmetric() && g_.symmetric() && f_.mode() == 0.0 && g_.mode() == 0.0,
                    "Decomposer: f and g must be symmetric about 0");
    detail::require(std::isfinite(f_.support_hi()), "Decomposer: f needs bounded support");
    width_ = 2.0 * f_.support_hi();
    f_unit_ = affine(f_, 1.0 / width_);
    lambda_ = lambda ? *lambda : lambda_mixture(f_, g_);
    detail::require(lambda_ >= 0.0 && lambda_ <= 1.0, "Decomposer: lambda must lie in [0, 1]");
  }

  ScaleShift draw(SharedRandomness& rng) const {
    const double x = g_.sample(rng);
    const double gx = g_.pdf(x);
    const double v = gx * rng.uniform01();
    if (v > gx - lambda_ * f_.pdf(x)) return {};
    auto residual = [this](double y) { return g_.pdf(y) - lambda_ * f_.pdf(y); };
    const double hi = numeric::bracket_decreasing(residual, v, 0.0, g_.stddev());
    const double s = numeric::bisect_decreasing(residual, v, 0.0, hi);
    const ScaleShift u = decompose_unif(f_unit_, rng);
    return {2.0 * u.a * s / width_, 2.0 * u.b * s};
  }

  double lambda() const { return lambda_; }
  double width() const { return width_; }
  const UnimodalPdf& base() const { return f_; }
  const UnimodalPdf& target() const { return g_; }

 private:
  UnimodalPdf f_;
  UnimodalPdf g_;
  UnimodalPdf f_unit_;
  double width_ = 0.0;
  double lambda_ = 0.0;
};

inline ScaleShift decompose(const Decomposer& d, SharedRandomness& rng) { return d.draw(rng); }

// Mixture weight rule for the Irwin-Hall base: no mixture component below
// three summands, where IH is not differentiable at the mode.
inline Decomposer make_irwin_hall_decomposer(int n, const UnimodalPdf& target) {
  IrwinHallPdf base = irwin_hall(n, 0.0, 1.0);
  if (n <= 2) return Decomposer(base, target, 0.0);
  return Decomposer(base, target);
}

struct AggregateConfig {
  int n_clients;
  double sigma;
  double step_w;  // 2 sigma sqrt(3n)
  Decomposer decomposer;
};

// Target law sigma * q, where q is symmetric with unit scale (N(0, 1) by
// default).
inline AggregateConfig make_aggregate_config(int n, double sigma,
                                             const UnimodalPdf& q = gaussian(1.0)) {
  return AggregateConfig{n, sigma, irwin_hall_step(n, sigma), make_irwin_hall_decomposer(n, q)};
}

inline SharedRandomness scale_shift_stream(const SharedRandomness& root, std::uint64_t coordinate) {
  return root.substream(coordinate).substream(0);
}

inline SharedRandomness dither_stream(const SharedRandomness& root, std::uint64_t client,
                                      std::uint64_t coordinate) {
  return derive_client_stream(root, client + 1, coordinate);
}

inline ScaleShift draw_scale_shift(const AggregateConfig& cfg, const SharedRandomness& root,
                                   std::uint64_t coordinate = 0) {
  SharedRandomness rng = scale_shift_stream(root, coordinate);
  return cfg.decomposer.draw(rng);
}

inline double client_dither(const SharedRandomness& root, std::uint64_t client,
                            std::uint64_t coordinate = 0) {
  SharedRandomness rng = dither_stream(root, client, coordinate);
  return rng.centered_uniform();
}

// Identifies the shared randomness a party is using.
inline std::uint64_t randomness_checksum(const AggregateConfig& cfg, const SharedRandomness& root) {
  return mix64(mix_stream_id(root.seed(), root.stream_id()) ^
               static_cast<std::uint64_t>(cfg.n_clients));
}

using WideMessage = long double;

inline WideMessage aggregate_message(double x, ScaleShift ab, double s, double w) {
  detail::require_finite(x, "aggregate_encode: x");
  const long double y = static_cast<long double>(x) / (static_cast<long double>(ab.a) * w) + s;
  const long double m = std::floor(y + 0.5L);
  if (!std::isfinite(m)) throw OverflowError("aggregate_encode: message is not finite");
  return m;
}

inline std::int64_t to_wire(WideMessage m) {
  if (!(std::abs(m) < 0x1.0p62L)) throw OverflowError("to_wire: message exceeds 2^62");
  return static_cast<std::int64_t>(m);
}

inline std::int64_t aggregate_encode_with(double x, ScaleShift ab, double s, double w) {
  return to_wire(aggregate_message(x, ab, s, w));
}

inline std::int64_t aggregate_encode(double x, std::uint64_t client, const AggregateConfig& cfg,
                                     const SharedRandomness& root, std::uint64_t coordinate = 0) {
  detail::require(client < static_cast<std::uint64_t>(cfg.n_clients), "aggregate_encode: bad client id");
  return aggregate_encode_with(x, draw_scale_shift(cfg, root, coordinate),
                               client_dither(root, client, coordinate), cfg.step_w);
}

inline double aggregate_decode_with(WideMessage sum_m, double sum_s, ScaleShift ab,
                                    const AggregateConfig& cfg) {
  const long double scale = static_cast<long double>(ab.a) * cfg.step_w / cfg.n_clients;
  return static_cast<double>(scale * (sum_m - sum_s)) + ab.b * cfg.sigma;
}

inline double aggregate_decode(WideMessage sum_m, const AggregateConfig& cfg,
                               const SharedRandomness& root, std::uint64_t coordinate = 0,
                               std::optional<std::uint64_t> checksum = std::nullopt) {
  if (checksum && *checksum != randomness_checksum(cfg, root)) {
    throw RandomnessMismatch("aggregate_decode: shared randomness differs from the encoders'");
  }
  double sum_s = 0.0;
  for (int i = 0; i < cfg.n_clients; ++i) sum_s += client_dither(root, i, coordinate);
  return aggregate_decode_with(sum_m, sum_s, draw_scale_shift(cfg, root, coordinate), cfg);
}

// Client i's additive share of the decode: (A w / n)(m - s + b'), with
// b' = B sigma / (A w) so that the shares sum to the full decode.
inline double aggregate_decode_share(WideMessage m, double s, ScaleShift ab,
                                     const AggregateConfig& cfg) {
  const long double aw = static_cast<long double>(ab.a) * cfg.step_w;
  const long double b_prime = ab.b * cfg.sigma / aw;
  return static_cast<double>(aw / cfg.n_clients * (m - s + b_prime));
}

// Shared quantities of one round over d coordinates.
struct AggregateRound {
  std::vector<ScaleShift> ab;              // per coordinate
  std::vector<std::vector<double>> s;      // [client][coordinate]
  std::uint64_t checksum = 0;
};

inline AggregateRound prepare_round(const AggregateConfig& cfg, const SharedRandomness& root,
                                    std::size_t d) {
  AggregateRound r;
  r.ab.reserve(d);
  for (std::size_t j = 0; j < d; ++j) r.ab.push_back(draw_scale_shift(cfg, root, j));
  r.s.assign(cfg.n_clients, std::vector<double>(d));
  for (int i = 0; i < cfg.n_clients; ++i) {
    for (std::size_t j = 0; j < d; ++j) r.s[i][j] = client_dither(root, i, j);
  }
  r.checksum = randomness_checksum(cfg, root);
  return r;
}

inline std::vector<WideMessage> aggregate_encode_vector(std::span<const double> x, int client,
                                                        const AggregateConfig& cfg,
                                                        const AggregateRound& round) {
  detail::require(x.size() == round.ab.size(), "aggregate_encode_vector: length mismatch");
  std::vector<WideMessage> m(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    m[j] = aggregate_message(x[j], round.ab[j], round.s[client][j], cfg.step_w);
  }
  return m;
}

inline std::vector<double> aggregate_decode_vector(std::span<const WideMessage> sum_m,
                                                   const AggregateConfig& cfg,
                                                   const AggregateRound& round) {
  detail::require(sum_m.size() == round.ab.size(), "aggregate_decode_vector: length mismatch");
  std::vector<double> y(sum_m.size());
  for (std::size_t j = 0; j < sum_m.size(); ++j) {
    double sum_s = 0.0;
    for (int i = 0; i < cfg.n_clients; ++i) sum_s += round.s[i][j];
    y[j] = aggregate_decode_with(sum_m[j], sum_s, round.ab[j], cfg);
  }
  return y;
}

// |m| <= ceil(t / (2 w A)) + 1 whenever |x| <= t / 2.
inline std::int64_t aggregate_message_bound(double t, double w, double a) {
  return static_cast<std::int64_t>(std::ceil(t / (2.0 * w * a))) + 1;
}

// Sum of messages reduced into [0, modulus).
inline std::uint64_t modular_sum(std::span<const std::int64_t> messages, std::uint64_t modulus) {
  detail::require(modulus >= 2, "modular_sum: modulus must be at least 2");
  const auto mod = static_cast<__int128>(modulus);
  __int128 acc = 0;
  for (std::int64_t m : messages) {
    acc = (acc + m % mod + mod) % mod;
  }
  return static_cast<std::uint64_t>(acc);
}

// Representative of `residue` in (-modulus/2, modulus/2].
inline std::int64_t dealias(std::uint64_t residue, std::uint64_t modulus) {
  detail::require(residue < modulus, "dealias: residue out of range");
  if (residue > modulus / 2) return -static_cast<std::int64_t>(modulus - residue);
  return static_cast<std::int64_t>(residue);
}

// Smallest modulus that recovers any sum of n messages with |m| <= bound.
inline std::uint64_t required_modulus(std::uint64_t n, std::uint64_t bound) {
  return 2 * n * bound + 1;
}

// Modular-sum path: reduce, then dealias. Throws OverflowError if the
// modulus cannot represent the sum or a message exceeds its bound.
inline std::int64_t secure_sum(std::span<const std::int64_t> messages, std::uint64_t modulus,
                               std::uint64_t per_message_bound) {
  if (modulus < required_modulus(messages.size(), per_message_bound)) {
    throw OverflowError("secure_sum: modulus smaller than the dynamic range");
  }
  for (std::int64_t m : messages) {
    if (static_cast<std::uint64_t>(m < 0 ? -m : m) > per_message_bound) {
      throw OverflowError("secure_sum: message exceeds its bound");
    }
  }
  return dealias(modular_sum(messages, modulus), modulus);
}

}  // namespace exactq

#endif  // EXACTQ_AGGREGATE_HPP_
