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

#include "beep/luby.hpp"

#include <bit>
#include <stdexcept>

namespace beep {

Action LubyCore::act(std::uint64_t cycle, int slot, Rng& rng) {
  Action a = Action::listen;
  switch (slot) {
    case 0: {
      boundary_now_ = at_boundary(cycle);
      const bool beep_here = (semantics_ == RestartSemantics::proof_consistent)
                                 ? !boundary_now_
                                 : boundary_now_;
      a = beep_here ? Action::beep : Action::listen;
      break;
    }
    case 1:
      a = state_ == NodeState::mis ? Action::beep : Action::listen;
      break;
    case 2:
      if (state_ == NodeState::inactive)
        a = Action::listen;
      else
        a = rng.bernoulli(0.5) ? Action::beep : Action::listen;
      break;
    default:
      throw std::invalid_argument("luby: slot out of range");
  }
  listened_ = a == Action::listen;
  return a;
}

double LubyCore::prob(std::uint64_t cycle, int slot) const {
  switch (slot) {
    case 0: {
      const bool boundary = at_boundary(cycle);
      const bool beep_here =
          (semantics_ == RestartSemantics::proof_consistent) ? !boundary : boundary;
      return beep_here ? 1.0 : 0.0;
    }
    case 1:
      return state_ == NodeState::mis ? 1.0 : 0.0;
    case 2:
      return state_ == NodeState::inactive ? 0.0 : 0.5;
  }
  return 0.0;
}

void LubyCore::deliver(int slot, bool heard) {
  heard = heard && listened_;
  switch (slot) {
    case 0:
      if (semantics_ == RestartSemantics::literal) {
        // Transitions fire unconditionally at the boundary; a restart beep
        // heard away from the boundary is ignored.
        if (boundary_now_) {
          if (state_ == NodeState::inactive) {
            if (!mis_suppressed_) state_ = NodeState::competing;
          } else if (state_ == NodeState::competing) {
            state_ = NodeState::mis;
          }
          mis_suppressed_ = false;
        }
        break;
      }
      if (!boundary_now_) break;  // the node beeped, nothing to process
      if (heard) {
        double_period();
        if (state_ == NodeState::competing) state_ = NodeState::inactive;
      } else {
        if (state_ == NodeState::inactive) {
          if (!mis_suppressed_) state_ = NodeState::competing;
        } else if (state_ == NodeState::competing) {
          state_ = NodeState::mis;
        }
      }
      mis_suppressed_ = false;
      break;

    case 1:
      if (heard) {
        state_ = NodeState::inactive;
        mis_suppressed_ = true;
      }
      break;

    case 2:
      if (heard && state_ != NodeState::inactive) {
        if (state_ == NodeState::mis) {
          // losing a tie against a node that stays in the MIS: double k and
          // sit out the next boundary like any other censored neighbor
          double_period();
          mis_suppressed_ = true;
        }
        state_ = NodeState::inactive;
      }
      break;
  }
}

LubyProtocol::LubyProtocol(LubyConfig cfg, Round wake_round)
    : core_(0, cfg.semantics), wake_(wake_round) {
  if (cfg.initial_k < 6 || cfg.initial_k % 6 != 0 ||
      !std::has_single_bit(cfg.initial_k / 6))
    throw std::invalid_argument("luby: initial k must be 6 * 2^j");
  core_ = LubyCore(cfg.initial_k / 3, cfg.semantics);
  start_ = (wake_ + 2) / 3 * 3;
}

StepInfo LubyProtocol::act(Round t, Rng& rng) {
  if (t < wake_)
    throw std::invalid_argument("luby: stepped before wake round");
  StepInfo info;
  info.state = core_.state();
  info.k = static_cast<std::uint32_t>(k());
  if (t < start_) {
    info.action = Action::listen;
    waiting_ = true;
    return info;
  }
  waiting_ = false;
  const std::uint64_t cycle = t / 3;
  pending_slot_ = static_cast<int>(t % 3);
  info.beep_prob = static_cast<float>(core_.prob(cycle, pending_slot_));
  info.action = core_.act(cycle, pending_slot_, rng);
  return info;
}

void LubyProtocol::deliver(Observation obs) {
  if (waiting_) return;  // unaligned rounds before the first triple start
  core_.deliver(pending_slot_, obs == Observation::heard_beep);
}

}  // namespace beep
