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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace beep::codec {

using Bit = std::uint8_t;

struct DecodeFault : std::runtime_error {
  explicit DecodeFault(const std::string& what) : std::runtime_error(what) {}
};

// Number of time bits of block `index`: the binary width of the index,
// with block 0 still carrying one bit. Data bits per block equal this.
int time_bit_count(std::uint64_t index);

// Total data bits carried by blocks 0..index-1.
std::uint64_t data_bits_before(std::uint64_t index);

// Wire form: two zeros, then each payload bit (time bits high-order first,
// then data bits) preceded by a one, then a trailing one. Two consecutive
// zeros therefore occur only at block starts.
std::vector<Bit> encode_block(std::uint64_t index, std::span<const Bit> data);

struct DecodedBlock {
  std::uint64_t index = 0;
  std::vector<Bit> data;
  std::size_t begin = 0;  // offset of the block's first header zero
  std::size_t end = 0;    // offset of the trailing one
};

// Decodes a stream that is a concatenation of valid blocks, entered at an
// arbitrary offset: scans to the first double zero, then parses complete
// blocks. Violated separators raise DecodeFault. Trailing partial blocks
// are ignored.
std::vector<DecodedBlock> decode_stream(std::span<const Bit> bits);

// Four initial silent rounds mean the channel is empty: nobody within
// earshot transmits, so the listener is alone and the time is zero. On a
// busy channel the longest silent run is the two-zero header.
bool channel_empty_prefix(std::span<const Bit> bits);

// Incremental decoder: push observed bits, completed blocks come out in
// order with offsets relative to the first pushed bit.
class StreamDecoder {
 public:
  void push(Bit b);
  std::optional<DecodedBlock> take();
  bool fault() const { return fault_; }
  void reset();
  std::size_t bits_seen() const { return pos_; }

 private:
  enum class Phase { searching, expect_sep, look1, look2 } phase_ = Phase::searching;
  std::size_t pos_ = 0;
  Bit prev_ = 1;
  bool have_prev_ = false;
  std::size_t block_begin_ = 0;
  std::size_t sep_pos_ = 0;
  Bit held_ = 0;
  std::vector<Bit> payload_;
  std::vector<DecodedBlock> ready_;
  bool fault_ = false;

  void complete_block(std::size_t trailer_pos);
};

// Carry sequence value: number of trailing zeros of n in base two. n >= 1.
std::uint32_t carry_value(std::uint64_t n);

// Parity of the number of occurrences of carry_value(n) among the first n
// carry values. n >= 1.
Bit parity_bit(std::uint64_t n);

std::string carry_prefix(std::size_t count);   // digits of carry_value(1..count)
std::string parity_prefix(std::size_t count);  // bits of parity_bit(1..count)

enum class AlignStatus { ok, insufficient, fault };

struct AlignResult {
  // Window start position s modulo 2^(level+1).
  std::uint32_t start_mod = 0;
  std::uint32_t modulus = 1;
  // (offset within window, carry value) for every position with carry <= level.
  std::vector<std::pair<std::size_t, std::uint32_t>> positions;
};

// Given a contiguous slice of the parity sequence starting at an unknown
// position s >= 1, recovers all positions with carry value <= level, plus s
// modulo 2^(level+1). Splitting the window by index parity, the class of
// carry-value-j positions is strictly alternating while the other class
// never contains four alternating consecutive values; recursing on the
// non-alternating class peels one level at a time. Requires a window of at
// least 11 * 2^level bits.
AlignStatus align_window(std::span<const Bit> window, std::uint32_t level,
                         AlignResult& out);

}  // namespace beep::codec
