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

#include "beep/protocol.hpp"

namespace beep {

struct FastMisConfig {
  std::uint32_t size_bound = 16;  // N: known upper bound on n, power of two >= 2
  std::uint32_t c = 18;           // schedule length multiplier, >= 1

  // Smallest power of two >= x (>= 2).
  static std::uint32_t round_up_pow2(std::uint32_t x);
};

// Randomized MIS with a known size bound N. A fresh (or restarted) node
// listens for c*log2(N)^2 rounds, then competes through log2(N) phases of
// c*log2(N) rounds, beeping with probability 2^i/(8N) in phase i. Surviving
// all phases it enters the MIS loop: per two-round block, a fair coin picks
// beep-then-listen or listen-then-beep. Hearing a beep in any listening
// round restarts the whole schedule.
class FastMis final : public Protocol {
 public:
  // Throws std::invalid_argument unless N is a power of two >= 2 and c >= 1.
  explicit FastMis(FastMisConfig cfg);

  StepInfo act(Round t, Rng& rng) override;
  void deliver(Observation obs) override;
  NodeState state() const override { return stage_; }

  // Probability of beeping in the upcoming round: 0 while inactive,
  // 2^i/(8N) in competing phase i, and the 1/2 per-round marginal of the
  // paired pattern in the MIS loop.
  double beep_probability() const;

  // Schedule value used for beep-potential accounting. Identical to
  // beep_probability() except in the MIS loop, where the potential analysis
  // tracks the final competing phase figure 1/8 rather than the paired
  // pattern's 1/2 marginal; with 1/2 the slow-change bound would admit real
  // counterexamples and it is required to hold without exception.
  double declared_probability() const;

  std::uint32_t log2_bound() const { return log_n_; }
  std::uint32_t phase() const { return phase_; }  // 1-based; 0 when not competing
  Round inactive_rounds() const { return inactive_len_; }
  Round competing_rounds() const { return static_cast<Round>(log_n_) * phase_len_; }

 private:
  void restart();

  FastMisConfig cfg_;
  std::uint32_t log_n_;
  Round inactive_len_;
  Round phase_len_;

  NodeState stage_ = NodeState::inactive;
  Round pos_ = 0;        // rounds completed in the current stage
  std::uint32_t phase_ = 0;
  bool second_slot_ = false;  // MIS loop: inside a block's second round
  Action pending_ = Action::listen;
  Action last_action_ = Action::listen;
};

}  // namespace beep
