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

// Shared randomness for encoders and decoders.
//
// Every party that knows (seed, stream_id) regenerates the same sequence of
// draws. The generator is Philox4x32-10 used in counter mode, so a stream is
// fully described by its seed, its stream id and the index of the next draw;
// there is no hidden state to keep in sync.
//
// Bit-level contract (two implementations agree iff they follow this):
//   key     = { seed & 0xffffffff, seed >> 32 }
//   counter = { k & 0xffffffff, k >> 32, id & 0xffffffff, id >> 32 }
//             where k is the draw index and id the stream id
//   out     = Philox4x32-10(counter, key)
//   u64     = (out[1] << 32) | out[0]
//   uniform = (u64 >> 11) * 2^-53                          in [0, 1)
// Sub-stream ids are derived with mix_stream_id() below.

#ifndef EXACTQ_RANDOM_HPP_
#define EXACTQ_RANDOM_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace exactq {

using Philox4x32Block = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds (Salmon et al., "Parallel random numbers: as easy
// as 1, 2, 3").
constexpr Philox4x32Block philox4x32_10(Philox4x32Block ctr, Philox4x32Key key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stream id of the child labelled `label` under `parent`.
constexpr std::uint64_t mix_stream_id(std::uint64_t parent, std::uint64_t label) {
  return mix64(mix64(parent + 0x9E3779B97F4A7C15ull) ^ (label * 0xD1B54A32D192ED03ull + 1));
}

// A reproducible stream of draws. Value type: copying forks a stream that
// replays the same future draws.
class SharedRandomness {
 public:
  using result_type = std::uint64_t;

  SharedRandomness() = default;
  explicit SharedRandomness(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64() {
    const Philox4x32Block ctr = {
        static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
        static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)};
    const Philox4x32Key key = {static_cast<std::uint32_t>(seed_),
                               static_cast<std::uint32_t>(seed_ >> 32)};
    const Philox4x32Block out = philox4x32_10(ctr, key);
    ++counter_;
    return (std::uint64_t{out[1]} << 32) | out[0];
  }

  // 53-bit uniform in [0, 1). Advances the counter by exactly one.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1].
  double uniform_open_closed() { return 1.0 - uniform01(); }

  // Uniform in (0, 1); never returns an endpoint.
  double uniform_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  // Uniform in [-1/2, 1/2).
  double centered_uniform() { return uniform01() - 0.5; }

  // Standard normal by Box-Muller; consumes exactly two draws.
  double normal() {
    const double radius = std::sqrt(-2.0 * std::log(uniform_open_closed()));
    const double angle = 2.0 * std::numbers::pi * uniform01();
    return radius * std::cos(angle);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Independent child stream with the same seed; the parent is untouched.
  SharedRandomness substream(std::uint64_t label) const {
    return SharedRandomness(seed_, mix_stream_id(stream_id_, label));
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }

  friend bool operator==(const SharedRandomness&, const SharedRandomness&) = default;

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::uint64_t counter_ = 0;
};

// Stream shared by client `client_id` and the server for one coordinate.
// Both sides call this with the same arguments and obtain identical streams.
inline SharedRandomness derive_client_stream(const SharedRandomness& root, std::uint64_t client_id,
                                             std::uint64_t coordinate) {
  return root.substream(coordinate).substream(client_id);
}

}  // namespace exactq

#endif  // EXACTQ_RANDOM_HPP_
