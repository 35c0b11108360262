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

#include "beep/wakeup.hpp"

#include <bit>
#include <algorithm>
#include <span>
#include <cmath>
#include <stdexcept>

namespace beep {

namespace {

std::uint64_t delta_modulus(std::uint64_t degree_bound) {
  const double lg = std::log2(std::max<double>(4.0, static_cast<double>(degree_bound)));
  const auto bits = static_cast<std::uint64_t>(std::ceil(std::log2(lg)));
  return 1ull << std::max<std::uint64_t>(1, bits);
}

}  // namespace

W1Protocol::W1Protocol(W1Config cfg, Round wake)
    : cfg_(cfg), wake_(wake), core_(2, cfg.semantics) {
  if (cfg_.degree_bound) core_.set_period_cap(delta_modulus(*cfg_.degree_bound));
}

std::uint64_t W1Protocol::modulus() const {
  return cfg_.degree_bound ? delta_modulus(*cfg_.degree_bound) : 0;
}

int W1Protocol::time_width() const {
  if (cfg_.degree_bound)
    return static_cast<int>(std::bit_width(modulus() - 1));
  return codec::time_bit_count(block_);
}

int W1Protocol::data_width() const {
  return cfg_.degree_bound ? 3 : codec::time_bit_count(block_);
}

std::uint64_t W1Protocol::tx_index() const {
  return cfg_.degree_bound ? block_ % modulus() : block_;
}

void W1Protocol::advance_to(Round t) {
  while (t - block_start_ >= block_len()) {
    block_start_ += block_len();
    r_base_ += data_width();
    ++block_;
  }
}

void W1Protocol::become_synced(std::uint64_t next_block, Round start_round) {
  mode_ = Mode::synced;
  block_ = next_block;
  block_start_ = start_round;
  r_base_ = cfg_.degree_bound ? 3 * next_block : codec::data_bits_before(next_block);
  r_join_ = (r_base_ + 2) / 3 * 3;
}

StepInfo W1Protocol::act(Round t, Rng& rng) {
  if (t < wake_) throw std::invalid_argument("w1: stepped before wake round");
  StepInfo info;
  info.state = core_.state();
  info.k = static_cast<std::uint32_t>(k());
  info.levels = mode_ == Mode::synced ? std::int8_t{62} : std::int8_t{-1};
  pending_data_ = false;

  if (mode_ != Mode::synced) {
    info.action = Action::listen;
    return info;
  }

  advance_to(t);
  const Round p = t - block_start_;
  const int m = time_width();

  if (p < 2) {
    info.action = Action::listen;  // header silence
    return info;
  }
  if (p % 2 == 0) {  // separators, including the trailer
    info.action = Action::beep;
    info.beep_prob = 1.0f;
    return info;
  }
  const std::uint64_t j = (p - 3) / 2;
  if (j < static_cast<std::uint64_t>(m)) {  // time bit, high-order first
    const int bit = static_cast<int>((tx_index() >> (m - 1 - j)) & 1);
    info.action = bit ? Action::beep : Action::listen;
    info.beep_prob = static_cast<float>(bit);
    return info;
  }
  // data slot
  const std::uint64_t r = r_base_ + (j - m);
  if (r < r_join_) {
    info.action = Action::listen;  // joined mid-stream, wait for alignment
    return info;
  }
  const std::uint64_t cycle =
      cfg_.degree_bound ? (block_ % modulus()) : r / 3;
  pending_slot_ = static_cast<int>(r % 3);
  pending_data_ = true;
  info.beep_prob = static_cast<float>(core_.prob(cycle, pending_slot_));
  info.action = core_.act(cycle, pending_slot_, rng);
  info.state = core_.state();
  return info;
}

void W1Protocol::deliver(Observation obs) {
  const codec::Bit bit = obs == Observation::heard_beep ? 1 : 0;
  switch (mode_) {
    case Mode::probe:
      decoder_.push(bit);
      probe_heard_ = probe_heard_ || bit;
      if (++probe_count_ == 4) {
        if (!probe_heard_) {
          // an empty channel means nobody transmits: alone, time zero
          become_synced(0, wake_ + 4);
        } else {
          mode_ = Mode::learn;
        }
      }
      break;

    case Mode::learn: {
      decoder_.push(bit);
      if (decoder_.fault()) {
        decoder_.reset();
        break;
      }
      if (auto blk = decoder_.take()) {
        if (cfg_.degree_bound && blk->index >= modulus()) {
          decoder_.reset();
          break;
        }
        // the confirming zeros are the next block's header; its second zero
        // is the bit just pushed, so that block started one round ago
        const Round now = wake_ + decoder_.bits_seen() - 1;
        become_synced(blk->index + 1, now - 1);
      }
      break;
    }

    case Mode::synced:
      if (pending_data_) core_.deliver(pending_slot_, obs == Observation::heard_beep);
      break;
  }
}

W2Protocol::W2Protocol(Round wake, RestartSemantics semantics)
    : wake_(wake), initial_(wake == 0), core_(1, semantics) {
  if (initial_) {
    mode_ = Mode::participant;
    grid_start_ = 0;
    true_block_ = 1;
  } else {
    mode_ = Mode::scanning;
    core_.set_period_cap(1);
  }
}

void W2Protocol::reset_learning() {
  window_.clear();
  level_cur_ = -1;
  cand_streak_ = 0;
  for (bool& h : have_next_) h = false;
}

void W2Protocol::push_window_bit(codec::Bit b) {
  window_.push_back(b);
  try_align();
  const int target = std::min(kMaxLevel, level_cur_ + 1);
  const std::size_t keep = std::size_t{33} << target;
  if (window_.size() > keep)
    window_.erase(window_.begin(), window_.end() - keep);
}

void W2Protocol::try_align() {
  const int target = level_cur_ + 1;
  if (target > kMaxLevel) return;
  const std::size_t len = std::size_t{11} << target;
  if (window_.size() < len) return;
  std::span<const codec::Bit> suffix(window_.data() + (window_.size() - len), len);
  codec::AlignResult res;
  if (codec::align_window(suffix, static_cast<std::uint32_t>(target), res) !=
      codec::AlignStatus::ok) {
    cand_streak_ = 0;
    return;
  }
  // the suffix advances one block per push, so a persisting phase shows up
  // as a start position advancing by one
  if (cand_streak_ > 0 && res.start_mod == (cand_start_mod_ + 1) % res.modulus)
    ++cand_streak_;
  else
    cand_streak_ = 1;
  cand_start_mod_ = res.start_mod;
  if (cand_streak_ < kConfirm) return;

  level_cur_ = target;
  level_hw_ = std::max(level_hw_, level_cur_);
  b_mod_ = (res.start_mod + len - 1) % res.modulus;
  core_.set_period_cap(1ull << (level_hw_ + 1));
  cand_streak_ = 0;
  for (int j = 0; j <= level_cur_; ++j) have_next_[j] = false;
  for (auto it = res.positions.rbegin(); it != res.positions.rend(); ++it) {
    const auto [off, lvl] = *it;
    if (!have_next_[lvl]) {
      next_bit_[lvl] = suffix[off] ^ 1;
      have_next_[lvl] = true;
    }
  }
}

StepInfo W2Protocol::act(Round t, Rng& rng) {
  if (t < wake_) throw std::invalid_argument("w2: stepped before wake round");
  last_round_ = t;
  StepInfo info;
  info.state = core_.state();
  info.k = static_cast<std::uint32_t>(core_.period());
  info.levels = static_cast<std::int8_t>(levels());
  pending_slot_ = -1;
  pending_t_ = TPending::none;

  if (mode_ != Mode::participant) {
    info.action = Action::listen;
    return info;
  }

  while (t - grid_start_ >= 11) {
    grid_start_ += 11;
    if (initial_) ++true_block_;
    ++b_mod_;
  }
  const Round p = t - grid_start_;
  const std::uint64_t cycle = initial_ ? true_block_ : b_mod_;

  switch (p) {
    case 0:
    case 1:
      info.action = Action::listen;  // header
      break;
    case 2:
    case 4:
    case 6:
    case 8:
    case 10:
      info.action = Action::beep;  // separators
      info.beep_prob = 1.0f;
      break;
    case 3: {  // time bit: the parity sequence at the block counter
      if (initial_) {
        const codec::Bit b = codec::parity_bit(true_block_);
        info.action = b ? Action::beep : Action::listen;
        info.beep_prob = static_cast<float>(b);
        pending_t_ = b ? TPending::emitted : TPending::predicted_zero;
        pending_t_level_ = -1;  // exact knowledge, no toggling state
      } else {
        int lvl = -1;
        if (level_cur_ >= 0) {
          const std::uint64_t mod = 1ull << (level_cur_ + 1);
          const std::uint64_t r = b_mod_ % mod;
          if (r != 0) lvl = std::countr_zero(r);
        }
        if (lvl >= 0 && have_next_[lvl]) {
          const codec::Bit b = next_bit_[lvl];
          info.action = b ? Action::beep : Action::listen;
          info.beep_prob = static_cast<float>(b);
          pending_t_ = b ? TPending::emitted : TPending::predicted_zero;
          pending_t_level_ = lvl;
        } else {
          info.action = Action::listen;
          pending_t_ = TPending::learning;
        }
      }
      break;
    }
    case 5:  // restart slot
      pending_slot_ = 0;
      info.beep_prob = static_cast<float>(core_.prob(cycle, 0));
      info.action = core_.act(cycle, 0, rng);
      break;
    case 7:  // MIS slot
      pending_slot_ = 1;
      info.beep_prob = static_cast<float>(core_.prob(cycle, 1));
      info.action = core_.act(cycle, 1, rng);
      break;
    case 9:  // competing slot
      pending_slot_ = 2;
      info.beep_prob = static_cast<float>(core_.prob(cycle, 2));
      info.action = core_.act(cycle, 2, rng);
      break;
  }
  info.state = core_.state();
  return info;
}

void W2Protocol::deliver(Observation obs) {
  const bool heard = obs == Observation::heard_beep;
  const codec::Bit bit = heard ? 1 : 0;

  switch (mode_) {
    case Mode::scanning:
      if (have_prev_ && prev_bit_ == 0 && bit == 0) {
        mode_ = Mode::verifying;
        verify_offset_ = 1;  // we are at offset 1 of the candidate block
        have_prev_ = false;
        break;
      }
      prev_bit_ = bit;
      have_prev_ = true;
      break;

    case Mode::verifying: {
      ++verify_offset_;
      const bool separator = verify_offset_ % 2 == 0;
      if (separator && !heard) {  // not a block grid after all
        mode_ = Mode::scanning;
        prev_bit_ = bit;
        have_prev_ = true;
        break;
      }
      if (verify_offset_ == 3) verify_t_bit_ = bit;
      if (verify_offset_ == 10) {
        // grid locked; the verified block seeds the window and the block
        // starting next round continues it
        mode_ = Mode::participant;
        grid_start_ = last_round_ + 1;
        b_mod_ = 1;
        window_.clear();
        window_.push_back(verify_t_bit_);
      }
      break;
    }

    case Mode::participant:
      if (pending_slot_ >= 0) core_.deliver(pending_slot_, heard);
      switch (pending_t_) {
        case TPending::none:
          break;
        case TPending::emitted:
          if (!initial_) {
            // toggle before the push: a commit inside the push re-derives
            // the next values from the window and must not be flipped again
            const codec::Bit sent = next_bit_[pending_t_level_];
            next_bit_[pending_t_level_] ^= 1;
            push_window_bit(sent);
          }
          break;
        case TPending::predicted_zero:
          if (!initial_) {
            if (heard) {  // a neighbor transmitted a one we predicted as zero
              reset_learning();
            } else {
              next_bit_[pending_t_level_] ^= 1;
              push_window_bit(0);
            }
          }
          break;
        case TPending::learning:
          push_window_bit(bit);
          break;
      }
      pending_t_ = TPending::none;
      pending_slot_ = -1;
      break;
  }
}

}  // namespace beep
