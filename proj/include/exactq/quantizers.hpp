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

// Subtractive dithering and the two layered quantizers.
//
// All rounding is half-up: round(y) = floor(y + 1/2).
//
// A layered quantizer with target density f draws a state S = (U, T) from
// the shared stream, with U ~ U(0, 1) and T a layer height. With step
// w(T) and offset c(T):
//   encode  M = round(x / w(T) + U)
//   decode  Y = (M - U) w(T) + c(T)
// and Y - x ~ f for every fixed x. Draw order per state: the layer height
// (its draws from f, then one uniform), then U.

#ifndef EXACTQ_QUANTIZERS_HPP_
#define EXACTQ_QUANTIZERS_HPP_

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "exactq/distributions.hpp"
#include "exactq/error.hpp"
#include "exactq/numeric.hpp"
#include "exactq/random.hpp"

namespace exactq {

namespace detail {

inline std::int64_t round_half_up(double y) {
  require_finite(y, "quantizer input");
  const double r = std::floor(y + 0.5);
  if (std::abs(r) >= 0x1.0p62) throw OverflowError("quantizer: message exceeds 2^62");
  return static_cast<std::int64_t>(r);
}

}  // namespace detail

inline std::int64_t dither_encode(double x, double s, double w) {
  detail::require_positive(w, "dither_encode: w");
  detail::require_finite(x, "dither_encode: x");
  return detail::round_half_up(x / w + s);
}

inline double dither_decode(std::int64_t m, double s, double w) {
  detail::require_positive(w, "dither_decode: w");
  return (static_cast<double>(m) - s) * w;
}

struct LayeredState {
  LayerScheme scheme = LayerScheme::kDirect;
  double u = 0.0;       // dither, U(0, 1)
  double tau = 0.0;     // layer height in (0, peak)
  double step = 1.0;    // f_D(tau) or f_W(tau)
  double center = 0.0;  // reconstruction offset
};

inline LayeredState sample_state(const LayerDensity& layer, SharedRandomness& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double tau = layer.sample(rng);
    if (!(tau > 0.0 && tau < layer.upper())) continue;
    const double step = layer.step(tau);
    if (!(step > 0.0) || !std::isfinite(step)) continue;
    LayeredState s;
    s.scheme = layer.scheme();
    s.tau = tau;
    s.step = step;
    s.center = layer.center(tau);
    s.u = rng.uniform01();
    return s;
  }
  throw NumericError("sample_state: could not draw a layer with a positive step");
}

// The flat-top guard of layered_pdf() does not apply here: a uniform target
// yields a valid (if trivial) quantizer.
inline LayeredState direct_sample_state(const UnimodalPdf& f, SharedRandomness& rng) {
  return sample_state(LayerDensity(f, LayerScheme::kDirect), rng);
}

inline LayeredState shifted_sample_state(const UnimodalPdf& f, SharedRandomness& rng) {
  return sample_state(LayerDensity(f, LayerScheme::kShifted), rng);
}

inline LayeredState sample_state(LayerScheme scheme, const UnimodalPdf& f, SharedRandomness& rng) {
  return sample_state(LayerDensity(f, scheme), rng);
}

inline std::int64_t layered_encode(double x, const LayeredState& s) {
  detail::require_finite(x, "layered_encode: x");
  return detail::round_half_up(x / s.step + s.u);
}

inline double layered_decode(std::int64_t m, const LayeredState& s) {
  return (static_cast<double>(m) - s.u) * s.step + s.center;
}

// Smallest step of the shifted quantizer, inf over (0, peak) of f_W.
inline double minimal_step(const UnimodalPdf& f) {
  const LayerDensity w(f, LayerScheme::kShifted);
  const double p = f.peak();
  auto step = [&w](double x) { return w.step(x); };
  return numeric::grid_then_golden(step, p * 1e-9, p * (1.0 - 1e-9), 4000).value;
}

// 2 + t / eta: bound on the number of distinct messages of the shifted
// quantizer when inputs lie in an interval of length t.
inline double support_size_bound(const UnimodalPdf& f, double t) {
  detail::require(t >= 0.0 && std::isfinite(t), "support_size_bound: t must be finite, >= 0");
  return 2.0 + t / minimal_step(f);
}

inline int fixed_length_bits_for_eta(double eta, double t) {
  detail::require_positive(eta, "fixed_length_bits: eta");
  detail::require(t >= 0.0 && std::isfinite(t), "fixed_length_bits: t must be finite, >= 0");
  return static_cast<int>(std::ceil(std::log2(2.0 + t / eta)));
}

// Bits of a fixed-length code for the shifted quantizer.
inline int fixed_length_bits(const UnimodalPdf& f, double t) {
  return fixed_length_bits_for_eta(minimal_step(f), t);
}

inline int fixed_length_bits(LayerScheme scheme, const UnimodalPdf& f, double t) {
  if (scheme == LayerScheme::kDirect) {
    throw InvalidArgument("fixed_length_bits: the direct quantizer has no positive minimal step");
  }
  return fixed_length_bits(f, t);
}

// Coordinate-wise application.
inline std::vector<std::int64_t> vector_encode(std::span<const double> x,
                                               std::span<const LayeredState> states) {
  detail::require(x.size() == states.size(), "vector_encode: length mismatch");
  std::vector<std::int64_t> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = layered_encode(x[j], states[j]);
  return out;
}

inline std::vector<double> vector_decode(std::span<const std::int64_t> m,
                                         std::span<const LayeredState> states) {
  detail::require(m.size() == states.size(), "vector_decode: length mismatch");
  std::vector<double> out(m.size());
  for (std::size_t j = 0; j < m.size(); ++j) out[j] = layered_decode(m[j], states[j]);
  return out;
}

inline std::vector<LayeredState> sample_states(LayerScheme scheme, const UnimodalPdf& f,
                                               std::size_t d, SharedRandomness& rng) {
  const LayerDensity layer(f, scheme);
  std::vector<LayeredState> out;
  out.reserve(d);
  for (std::size_t j = 0; j < d; ++j) out.push_back(sample_state(layer, rng));
  return out;
}

}  // namespace exactq

#endif  // EXACTQ_QUANTIZERS_HPP_
