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


#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "exactq/coding.hpp"
#include "exactq/random.hpp"

namespace exactq {
namespace {

TEST(Zigzag, SmallValues) {
  EXPECT_EQ(zigzag(0), 1u);
  EXPECT_EQ(zigzag(-1), 2u);
  EXPECT_EQ(zigzag(1), 3u);
  EXPECT_EQ(zigzag(-2), 4u);
}

TEST(Zigzag, Bijective) {
  for (std::int64_t m = -1000; m <= 1000; ++m) EXPECT_EQ(unzigzag(zigzag(m)), m);
  for (std::uint64_t k = 1; k <= 2000; ++k) EXPECT_EQ(zigzag(unzigzag(k)), k);
}

TEST(Zigzag, Limits) {
  const std::int64_t big = (std::int64_t{1} << 62) - 1;
  EXPECT_EQ(unzigzag(zigzag(big)), big);
  EXPECT_EQ(unzigzag(zigzag(-big)), -big);
  EXPECT_THROW(zigzag(std::int64_t{1} << 62), OverflowError);
  EXPECT_THROW(zigzag(-(std::int64_t{1} << 62)), OverflowError);
}

TEST(EliasGamma, CanonicalCodes) {
  EXPECT_EQ(elias_gamma_encode(1).to_string(), "1");
  EXPECT_EQ(elias_gamma_encode(2).to_string(), "010");
  EXPECT_EQ(elias_gamma_encode(5).to_string(), "00101");
  EXPECT_EQ(elias_gamma_encode(5).size(), 5u);
}

TEST(EliasGamma, LengthFormulaAndRoundTrip) {
  SharedRandomness rng(1);
  std::vector<std::uint64_t> ks;
  for (std::uint64_t k = 1; k < 5000; ++k) ks.push_back(k);
  for (int i = 0; i < 5000; ++i) ks.push_back((rng.next_u64() >> (rng.next_u64() % 64)) | 1u);
  ks.push_back(~std::uint64_t{0});
  for (std::uint64_t k : ks) {
    const BitBuffer b = elias_gamma_encode(k);
    int floor_log2 = 0;
    while ((k >> floor_log2) > 1) ++floor_log2;
    EXPECT_EQ(static_cast<int>(b.size()), 2 * floor_log2 + 1);
    EXPECT_EQ(elias_gamma_length(k), 2 * floor_log2 + 1);
    EXPECT_EQ(elias_gamma_decode(b), k);
  }
}

TEST(EliasGamma, LengthMonotoneInMagnitude) {
  int prev = 0;
  for (std::int64_t a = 0; a < 5000; ++a) {
    const int len = std::max(message_bits(a), message_bits(-a));
    EXPECT_GE(len, prev);
    prev = len;
  }
}

TEST(EliasGamma, RejectsZeroAndTruncation) {
  EXPECT_THROW(elias_gamma_encode(0), InvalidArgument);
  BitBuffer b;
  b.push(false);
  b.push(false);
  EXPECT_THROW(elias_gamma_decode(b), InvalidArgument);
}

TEST(BitBuffer, MostSignificantBitFirst) {
  const std::vector<std::int64_t> m{0, -1, 2};  // "1" "010" "00101"
  const BitBuffer b = encode_messages(m);
  EXPECT_EQ(b.to_string(), "101000101");
  ASSERT_EQ(b.bytes().size(), 2u);
  EXPECT_EQ(b.bytes()[0], 0xA2);
  EXPECT_EQ(b.bytes()[1], 0x80);
  EXPECT_EQ(BitBuffer::from_bytes(b.bytes(), b.size()), b);
}

TEST(Messages, StreamRoundTrip) {
  SharedRandomness rng(2);
  std::vector<std::int64_t> m;
  for (int i = 0; i < 3000; ++i) {
    m.push_back(static_cast<std::int64_t>(rng.next_u64() >> (2 + rng.next_u64() % 62)) *
                (rng.bernoulli(0.5) ? 1 : -1));
  }
  const BitBuffer b = encode_messages(m);
  EXPECT_EQ(decode_messages(b, m.size()), m);
  std::size_t total = 0;
  for (auto v : m) total += message_bits(v);
  EXPECT_EQ(b.size(), total);
}

TEST(Messages, WideBitsAgreeWithExact) {
  for (std::int64_t m : {0LL, 5LL, -9LL, 123456789LL, -(1LL << 40)}) {
    EXPECT_EQ(wide_message_bits(static_cast<long double>(m)), message_bits(m));
  }
  EXPECT_EQ(wide_message_bits(0x1.0p70L), 2.0 * 71 + 1);
}

TEST(MeasureBits, ZeroMessagesVariable) {
  const std::vector<std::vector<std::int64_t>> m(3, std::vector<std::int64_t>(10, 0));
  for (double b : measure_bits(m, BitMode::kVariable)) EXPECT_EQ(b, 10.0);
}

TEST(MeasureBits, FixedMode) {
  const double eta = 2.0 * std::sqrt(std::log(4.0));
  const std::vector<std::vector<std::int64_t>> m(2, std::vector<std::int64_t>(7, 3));
  for (double b : measure_bits(m, BitMode::kFixed, eta, 2.0 * eta)) EXPECT_EQ(b, 14.0);
  EXPECT_THROW(measure_bits(m, BitMode::kFixed), InvalidArgument);
}

}  // namespace
}  // namespace exactq
