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

// Restart-slot rule. The doubling argument needs nodes to listen at their
// own boundary and beep everywhere else, so that a larger-k neighbor is
// heard exactly at the smaller node's boundary and drives k upward
// (`proof_consistent`, the default). `literal` inverts the rule (beep only
// at the boundary) and is exposed for experimentation; under it a heard
// restart beep is a no-op.
enum class RestartSemantics : std::uint8_t { proof_consistent, literal };

// State machine for one communication cycle of three slots:
//   slot 0 (restart): boundary synchronization and promotions,
//   slot 1 (mis):     MIS occupancy broadcast,
//   slot 2 (competing): fair-coin competition.
// A boundary is a cycle index divisible by the node's period; doubling the
// synchronization parameter doubles the period. Promotions (inactive ->
// competing -> MIS) fire at boundaries with a silent restart slot, except
// that a node which heard an MIS beep since its previous boundary stays
// inactive; that keeps neighbors of a settled MIS node inactive instead of
// oscillating through competing at every boundary.
class LubyCore {
 public:
  LubyCore(std::uint64_t initial_period, RestartSemantics semantics)
      : period_(initial_period), semantics_(semantics) {}

  bool at_boundary(std::uint64_t cycle) const { return cycle % period_ == 0; }

  Action act(std::uint64_t cycle, int slot, Rng& rng);
  double prob(std::uint64_t cycle, int slot) const;  // beep probability of act
  // Must follow the act() of the same slot. `heard` is meaningful only when
  // the node listened.
  void deliver(int slot, bool heard);

  NodeState state() const { return state_; }
  std::uint64_t period() const { return period_; }
  // 0 means uncapped. The period never grows beyond the cap; lowering the
  // cap never shrinks an already reached period.
  void set_period_cap(std::uint64_t cap) { cap_ = cap; }

 private:
  void double_period() {
    if (cap_ == 0 || period_ * 2 <= cap_) period_ *= 2;
  }

  std::uint64_t period_;
  std::uint64_t cap_ = 0;
  RestartSemantics semantics_;
  NodeState state_ = NodeState::inactive;
  bool mis_suppressed_ = false;
  bool boundary_now_ = false;
  bool listened_ = false;
};

struct LubyConfig {
  std::uint64_t initial_k = 6;  // must be 6 * 2^j
  RestartSemantics semantics = RestartSemantics::proof_consistent;
};

// Synchronized-clock MIS protocol: beep-triples starting at rounds
// t = 0 (mod 3), parameter k = 6 * 2^j monotone non-decreasing, boundaries
// at t = 0 (mod k). Nodes waking mid-execution join inactive with the
// initial k at the next triple start.
class LubyProtocol final : public Protocol {
 public:
  LubyProtocol(LubyConfig cfg, Round wake_round);

  StepInfo act(Round t, Rng& rng) override;
  void deliver(Observation obs) override;
  NodeState state() const override { return core_.state(); }

  std::uint64_t k() const { return core_.period() * 3; }

 private:
  LubyCore core_;
  Round wake_;
  Round start_;  // first triple-aligned round
  bool waiting_ = true;
  int pending_slot_ = 0;
};

}  // namespace beep
