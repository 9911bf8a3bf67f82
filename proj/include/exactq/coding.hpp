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

// Message codecs.
//
// Signed messages are mapped to positive integers by zigzag (m >= 0 -> 2m+1,
// m < 0 -> -2m) and written with the Elias gamma code: floor(log2 k) zero
// bits followed by k in binary. Bits are packed MSB-first; the final byte is
// zero-padded.

#ifndef EXACTQ_CODING_HPP_
#define EXACTQ_CODING_HPP_

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exactq/error.hpp"
#include "exactq/quantizers.hpp"

namespace exactq {

inline constexpr std::int64_t kZigzagLimit = std::int64_t{1} << 62;

inline std::uint64_t zigzag(std::int64_t m) {
  if (m >= kZigzagLimit || m <= -kZigzagLimit) throw OverflowError("zigzag: |m| must be below 2^62");
  return m >= 0 ? 2 * static_cast<std::uint64_t>(m) + 1 : 2 * static_cast<std::uint64_t>(-m);
}

inline std::int64_t unzigzag(std::uint64_t k) {
  detail::require(k >= 1, "unzigzag: k must be positive");
  if (k & 1u) return static_cast<std::int64_t>((k - 1) / 2);
  return -static_cast<std::int64_t>(k / 2);
}

inline int elias_gamma_length(std::uint64_t k) {
  detail::require(k >= 1, "elias_gamma: k must be positive");
  return 2 * (std::bit_width(k) - 1) + 1;
}

class BitBuffer {
 public:
  void push(bool bit) {
    if (length_ % 8 == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (length_ % 8));
    ++length_;
  }

  bool at(std::size_t i) const {
    detail::require(i < length_, "BitBuffer: index out of range");
    return (bytes_[i / 8] >> (7 - i % 8)) & 1u;
  }

  std::size_t size() const { return length_; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

  std::string to_string() const {
    std::string s;
    s.reserve(length_);
    for (std::size_t i = 0; i < length_; ++i) s.push_back(at(i) ? '1' : '0');
    return s;
  }

  static BitBuffer from_bytes(std::vector<std::uint8_t> bytes, std::size_t length) {
    detail::require(length <= bytes.size() * 8, "BitBuffer: length exceeds data");
    BitBuffer b;
    b.bytes_ = std::move(bytes);
    b.length_ = length;
    return b;
  }

  friend bool operator==(const BitBuffer&, const BitBuffer&) = default;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t length_ = 0;
};

class BitReader {
 public:
  explicit BitReader(const BitBuffer& buffer) : buffer_(buffer) {}
  bool done() const { return pos_ >= buffer_.size(); }
  std::size_t position() const { return pos_; }
  bool next() {
    if (done()) throw InvalidArgument("BitReader: read past end of stream");
    return buffer_.at(pos_++);
  }

 private:
  const BitBuffer& buffer_;
  std::size_t pos_ = 0;
};

inline void elias_gamma_append(BitBuffer& out, std::uint64_t k) {
  detail::require(k >= 1, "elias_gamma: k must be positive");
  const int width = std::bit_width(k);
  for (int i = 1; i < width; ++i) out.push(false);
  for (int i = width - 1; i >= 0; --i) out.push((k >> i) & 1u);
}

inline BitBuffer elias_gamma_encode(std::uint64_t k) {
  BitBuffer out;
  elias_gamma_append(out, k);
  return out;
}

inline std::uint64_t elias_gamma_read(BitReader& in) {
  int zeros = 0;
  while (!in.next()) {
    if (++zeros > 63) throw InvalidArgument("elias_gamma: malformed prefix");
  }
  std::uint64_t k = 1;
  for (int i = 0; i < zeros; ++i) k = (k << 1) | (in.next() ? 1u : 0u);
  return k;
}

inline std::uint64_t elias_gamma_decode(const BitBuffer& bits) {
  BitReader in(bits);
  return elias_gamma_read(in);
}

// Zigzag + gamma for a sequence of signed messages.
inline BitBuffer encode_messages(std::span<const std::int64_t> messages) {
  BitBuffer out;
  for (std::int64_t m : messages) elias_gamma_append(out, zigzag(m));
  return out;
}

inline std::vector<std::int64_t> decode_messages(const BitBuffer& bits, std::size_t count) {
  BitReader in(bits);
  std::vector<std::int64_t> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(unzigzag(elias_gamma_read(in)));
  return out;
}

inline int message_bits(std::int64_t m) { return elias_gamma_length(zigzag(m)); }

// Gamma length of zigzag(m) for an integer-valued m of any magnitude.
inline double wide_message_bits(long double m) {
  if (std::abs(m) < 0x1.0p61L) return message_bits(static_cast<std::int64_t>(m));
  const long double k = m >= 0 ? 2.0L * m + 1.0L : -2.0L * m;
  return 2.0 * std::floor(static_cast<double>(std::log2(k))) + 1.0;
}

enum class BitMode { kVariable, kFixed };

// Per-client bit counts for an n x d message matrix. Fixed mode charges
// ceil(log2(2 + t / eta)) bits per coordinate.
inline std::vector<double> measure_bits(const std::vector<std::vector<std::int64_t>>& messages,
                                        BitMode mode, std::optional<double> eta = std::nullopt,
                                        std::optional<double> t = std::nullopt) {
  std::vector<double> bits;
  bits.reserve(messages.size());
  if (mode == BitMode::kFixed) {
    if (!eta || !t) throw InvalidArgument("measure_bits: fixed mode needs eta and t");
    const int per = fixed_length_bits_for_eta(*eta, *t);
    for (const auto& row : messages) bits.push_back(static_cast<double>(per) * row.size());
    return bits;
  }
  for (const auto& row : messages) {
    double total = 0.0;
    for (std::int64_t m : row) total += message_bits(m);
    bits.push_back(total);
  }
  return bits;
}

}  // namespace exactq

#endif  // EXACTQ_CODING_HPP_
