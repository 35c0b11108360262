/*
 * Copyright 2026 beepmis project
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "beep/time_codec.hpp"

#include <algorithm>
#include <bit>

namespace beep::codec {

int time_bit_count(std::uint64_t index) {
  if (index == 0) return 1;
  return std::bit_width(index);
}

std::uint64_t data_bits_before(std::uint64_t index) {
  std::uint64_t total = 0;
  for (std::uint64_t j = 0; j < index; ++j) total += time_bit_count(j);
  return total;
}

std::vector<Bit> encode_block(std::uint64_t index, std::span<const Bit> data) {
  const int m = time_bit_count(index);
  if (data.size() != static_cast<std::size_t>(m))
    throw std::invalid_argument("codec: data length must equal the time bit count");
  std::vector<Bit> wire;
  wire.reserve(3 + 4 * m);
  wire.push_back(0);
  wire.push_back(0);
  for (int j = m - 1; j >= 0; --j) {
    wire.push_back(1);
    wire.push_back(static_cast<Bit>((index >> j) & 1));
  }
  for (Bit b : data) {
    if (b > 1) throw std::invalid_argument("codec: data bits must be 0 or 1");
    wire.push_back(1);
    wire.push_back(b);
  }
  wire.push_back(1);
  return wire;
}

namespace {

DecodedBlock finish(std::span<const Bit> payload, std::size_t begin, std::size_t end) {
  if (payload.size() % 2 != 0)
    throw DecodeFault("codec: odd payload length");
  const std::size_t m = payload.size() / 2;
  if (m == 0) throw DecodeFault("codec: empty block");
  DecodedBlock blk;
  blk.begin = begin;
  blk.end = end;
  for (std::size_t j = 0; j < m; ++j) blk.index = (blk.index << 1) | payload[j];
  blk.data.assign(payload.begin() + m, payload.end());
  return blk;
}

}  // namespace

std::vector<DecodedBlock> decode_stream(std::span<const Bit> bits) {
  std::vector<DecodedBlock> out;
  const std::size_t n = bits.size();

  std::size_t pos = 0;
  while (pos + 1 < n && !(bits[pos] == 0 && bits[pos + 1] == 0)) ++pos;

  while (pos + 2 < n) {
    // at a header: bits[pos] = bits[pos+1] = 0
    const std::size_t begin = pos;
    std::size_t q = pos + 2;
    std::vector<Bit> payload;
    bool complete = false;
    while (true) {
      if (q >= n) break;  // partial block at stream end
      if (bits[q] != 1) throw DecodeFault("codec: separator violated");
      if (q + 1 >= n) {  // stream ends exactly at a trailing one
        complete = true;
        break;
      }
      if (bits[q + 1] == 0 && (q + 2 >= n || bits[q + 2] == 0)) {
        complete = true;  // trailing one followed by the next header
        break;
      }
      payload.push_back(bits[q + 1]);
      q += 2;
    }
    if (!complete) break;
    out.push_back(finish(payload, begin, q));
    pos = q + 1;
  }
  return out;
}

bool channel_empty_prefix(std::span<const Bit> bits) {
  if (bits.size() < 4) return false;
  return bits[0] == 0 && bits[1] == 0 && bits[2] == 0 && bits[3] == 0;
}

void StreamDecoder::reset() {
  phase_ = Phase::searching;
  have_prev_ = false;
  payload_.clear();
  fault_ = false;
}

void StreamDecoder::complete_block(std::size_t trailer_pos) {
  try {
    ready_.push_back(finish(payload_, block_begin_, trailer_pos));
  } catch (const DecodeFault&) {
    fault_ = true;
  }
  payload_.clear();
}

void StreamDecoder::push(Bit b) {
  const std::size_t i = pos_++;
  switch (phase_) {
    case Phase::searching:
      if (have_prev_ && prev_ == 0 && b == 0) {
        block_begin_ = i - 1;
        payload_.clear();
        phase_ = Phase::expect_sep;
      }
      prev_ = b;
      have_prev_ = true;
      break;

    case Phase::expect_sep:
      if (b != 1) {
        fault_ = true;
        phase_ = Phase::searching;
        have_prev_ = true;
        prev_ = b;
        break;
      }
      sep_pos_ = i;
      phase_ = Phase::look1;
      break;

    case Phase::look1:
      held_ = b;
      if (b == 1) {  // definitely a payload one; next bit starts a new pair
        payload_.push_back(1);
        phase_ = Phase::expect_sep;
      } else {
        phase_ = Phase::look2;  // zero: payload zero or start of next header
      }
      break;

    case Phase::look2:
      if (b == 0) {
        // the separator was a trailer; (held_, b) is the next block's header
        complete_block(sep_pos_);
        block_begin_ = i - 1;
        phase_ = Phase::expect_sep;
      } else {
        payload_.push_back(held_);
        sep_pos_ = i;
        phase_ = Phase::look1;
      }
      break;
  }
}

std::optional<DecodedBlock> StreamDecoder::take() {
  if (ready_.empty()) return std::nullopt;
  DecodedBlock blk = std::move(ready_.front());
  ready_.erase(ready_.begin());
  return blk;
}

std::uint32_t carry_value(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("codec: carry sequence is 1-indexed");
  return static_cast<std::uint32_t>(std::countr_zero(n));
}

Bit parity_bit(std::uint64_t n) {
  const std::uint32_t v = carry_value(n);
  // occurrences of v among carry_value(1..n)
  const std::uint64_t occ = (n >> v) - (n >> (v + 1));
  return static_cast<Bit>(occ & 1);
}

std::string carry_prefix(std::size_t count) {
  std::string s;
  s.reserve(count);
  for (std::size_t n = 1; n <= count; ++n) {
    const std::uint32_t v = carry_value(n);
    if (v > 9) {
      s += '(' + std::to_string(v) + ')';
    } else {
      s += static_cast<char>('0' + v);
    }
  }
  return s;
}

std::string parity_prefix(std::size_t count) {
  std::string s;
  s.reserve(count);
  for (std::size_t n = 1; n <= count; ++n) s += static_cast<char>('0' + parity_bit(n));
  return s;
}

namespace {

// Strictly alternating over its whole extent (length <= 1 counts).
bool strictly_alternating(std::span<const Bit> w, std::size_t first, std::size_t stride) {
  Bit prev = 0;
  bool have = false;
  for (std::size_t i = first; i < w.size(); i += stride) {
    if (have && w[i] == prev) return false;
    prev = w[i];
    have = true;
  }
  return true;
}

std::size_t count_elems(std::size_t len, std::size_t first, std::size_t stride) {
  if (first >= len) return 0;
  return (len - first - 1) / stride + 1;
}

}  // namespace

AlignStatus align_window(std::span<const Bit> window, std::uint32_t level,
                         AlignResult& out) {
  const std::uint64_t need = 11ull << level;
  if (window.size() < need) return AlignStatus::insufficient;

  out = AlignResult{};
  std::size_t first = 0;
  std::size_t stride = 1;

  for (std::uint32_t j = 0; j <= level; ++j) {
    const std::size_t even_first = first;
    const std::size_t odd_first = first + stride;
    if (count_elems(window.size(), even_first, 2 * stride) < 4 ||
        count_elems(window.size(), odd_first, 2 * stride) < 4)
      return AlignStatus::insufficient;

    const bool even_alt = strictly_alternating(window, even_first, 2 * stride);
    const bool odd_alt = strictly_alternating(window, odd_first, 2 * stride);
    if (even_alt && odd_alt) return AlignStatus::insufficient;
    if (!even_alt && !odd_alt) return AlignStatus::fault;

    // The alternating class holds the carry-value-j positions.
    const std::size_t alt_first = even_alt ? even_first : odd_first;
    for (std::size_t i = alt_first; i < window.size(); i += 2 * stride)
      out.positions.emplace_back(i, j);

    if (j == level) {
      // first element of the current class is n0 = s + first with
      // n0 = 0 (mod 2^j); its bit j is 1 exactly when the alternating class
      // sits on the even phase.
      const std::uint64_t mod = 1ull << (level + 1);
      const std::uint64_t n0_mod = even_alt ? (1ull << j) : 0;
      out.start_mod =
          static_cast<std::uint32_t>((n0_mod + mod - (first % mod)) % mod);
      out.modulus = static_cast<std::uint32_t>(mod);
      break;
    }
    // Recurse on the non-alternating class (carry values > j).
    first = even_alt ? odd_first : even_first;
    stride *= 2;
  }

  std::sort(out.positions.begin(), out.positions.end());
  return AlignStatus::ok;
}

}  // namespace beep::codec
