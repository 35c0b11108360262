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
#include <vector>

#include "beep/luby.hpp"
#include "beep/protocol.hpp"
#include "beep/time_codec.hpp"

namespace beep {

struct W1Config {
  // When set, time is tracked modulo M = 2^ceil(log2(log2(degree_bound)))
  // blocks: blocks carry the counter mod M in fixed-width time bits and one
  // triple of data bits, and k is capped so boundaries stay evaluable.
  std::optional<std::uint64_t> degree_bound;
  RestartSemantics semantics = RestartSemantics::proof_consistent;
};

// Time-broadcast wake-up protocol. Synchronized nodes emit variable-length
// blocks carrying the block counter; the triple-protocol bits ride on the
// data slots round-robin, so the whole synchronized-clock algorithm runs on
// the data sub-stream. A fresh node listens four rounds: total silence
// means it is alone and the time is zero, so it becomes a block source;
// otherwise it decodes the counter within at most two blocks and joins.
class W1Protocol final : public Protocol {
 public:
  W1Protocol(W1Config cfg, Round wake);

  StepInfo act(Round t, Rng& rng) override;
  void deliver(Observation obs) override;
  NodeState state() const override { return core_.state(); }

  bool synced() const { return mode_ == Mode::synced; }
  std::uint64_t block_counter() const { return block_; }
  std::uint64_t k() const { return core_.period() * 3; }

 private:
  enum class Mode { probe, learn, synced };

  std::uint64_t modulus() const;      // M for the capped variant, 0 otherwise
  int time_width() const;             // time bits of the current block
  int data_width() const;             // data bits of the current block
  Round block_len() const { return 3 + 2 * (time_width() + data_width()); }
  std::uint64_t tx_index() const;
  void advance_to(Round t);
  void become_synced(std::uint64_t next_block, Round start_round);

  W1Config cfg_;
  Round wake_;
  LubyCore core_;
  Mode mode_ = Mode::probe;

  int probe_count_ = 0;
  bool probe_heard_ = false;
  codec::StreamDecoder decoder_;

  std::uint64_t block_ = 0;   // current block counter
  Round block_start_ = 0;     // global round of the block's first header bit
  std::uint64_t r_base_ = 0;  // simulated round of the block's first data slot
  std::uint64_t r_join_ = 0;  // first simulated round this node plays

  bool pending_data_ = false;
  int pending_slot_ = 0;
};

// Quadruple-block wake-up protocol: fixed eleven-round blocks
// 0,0,1,T,1,R,1,M,1,C,1. T carries the parity sequence of the block
// counter; R/M/C run the triple protocol with the block index as the cycle
// and k counted in blocks (powers of two, starting at one). Nodes woken at
// round zero count blocks from the start and know every time bit; later
// nodes lock onto the block grid, learn parity levels from observed T bits
// by window alignment, and never grow k beyond the levels they can decode.
class W2Protocol final : public Protocol {
 public:
  explicit W2Protocol(Round wake, RestartSemantics semantics = RestartSemantics::proof_consistent);

  StepInfo act(Round t, Rng& rng) override;
  void deliver(Observation obs) override;
  NodeState state() const override { return core_.state(); }

  bool locked() const { return mode_ == Mode::participant; }
  int levels() const { return initial_ ? 62 : level_hw_; }
  int usable_levels() const { return initial_ ? 62 : level_cur_; }
  std::uint64_t k_blocks() const { return core_.period(); }

 private:
  enum class Mode { scanning, verifying, participant };
  enum class TPending { none, emitted, predicted_zero, learning };

  void push_window_bit(codec::Bit b);
  void try_align();
  void reset_learning();

  Round wake_;
  bool initial_;
  LubyCore core_;
  Mode mode_;

  // scanning / verifying
  bool have_prev_ = false;
  codec::Bit prev_bit_ = 1;
  int verify_offset_ = 0;
  codec::Bit verify_t_bit_ = 0;
  Round last_round_ = 0;

  // participant grid
  Round grid_start_ = 0;      // global round of the current block's header
  std::uint64_t true_block_ = 1;  // exact counter (initial nodes only)
  std::uint64_t b_mod_ = 0;       // believed block index, valid mod 2^(level_cur_+1)

  // learned time structure. Alignment always runs on the most recent
  // 11 * 2^target bits and is committed only after kConfirm consecutive
  // blocks agree, because a window spanning the moment a neighbor starts
  // emitting a level can alias to a wrong phase. A contradiction (a beep
  // heard where the current phase predicts silence) drops the usable
  // levels to nothing and re-derives them from fresh observations; the
  // high-water level keeps bounding k, which never shrinks.
  std::vector<codec::Bit> window_;
  int level_cur_ = -1;  // usable levels (emission, boundary phase)
  int level_hw_ = -1;   // high-water (recorded; bounds k)
  int cand_streak_ = 0;
  std::uint32_t cand_start_mod_ = 0;
  static constexpr int kMaxLevel = 30;
  static constexpr int kConfirm = 8;
  codec::Bit next_bit_[kMaxLevel + 1] = {};
  bool have_next_[kMaxLevel + 1] = {};

  // per-round pending state
  int pending_slot_ = -1;
  TPending pending_t_ = TPending::none;
  int pending_t_level_ = 0;
};

}  // namespace beep
