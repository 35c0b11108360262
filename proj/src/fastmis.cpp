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

#include "beep/fastmis.hpp"

#include <bit>
#include <stdexcept>

namespace beep {

std::uint32_t FastMisConfig::round_up_pow2(std::uint32_t x) {
  if (x <= 2) return 2;
  return std::bit_ceil(x);
}

FastMis::FastMis(FastMisConfig cfg) : cfg_(cfg) {
  if (cfg.size_bound < 2 || !std::has_single_bit(cfg.size_bound))
    throw std::invalid_argument("fastmis: size bound must be a power of two >= 2");
  if (cfg.c < 1) throw std::invalid_argument("fastmis: c must be >= 1");
  log_n_ = static_cast<std::uint32_t>(std::bit_width(cfg.size_bound) - 1);
  phase_len_ = static_cast<Round>(cfg.c) * log_n_;
  inactive_len_ = phase_len_ * log_n_;
  restart();
}

void FastMis::restart() {
  stage_ = NodeState::inactive;
  pos_ = 0;
  phase_ = 0;
  second_slot_ = false;
}

double FastMis::beep_probability() const {
  switch (stage_) {
    case NodeState::inactive: return 0.0;
    case NodeState::competing:
      return static_cast<double>(1ull << phase_) / (8.0 * cfg_.size_bound);
    case NodeState::mis: return 0.5;
  }
  return 0.0;
}

double FastMis::declared_probability() const {
  return stage_ == NodeState::mis ? 0.125 : beep_probability();
}

StepInfo FastMis::act(Round, Rng& rng) {
  StepInfo info;
  info.state = stage_;
  info.beep_prob = static_cast<float>(declared_probability());

  switch (stage_) {
    case NodeState::inactive:
      info.action = Action::listen;
      if (++pos_ == inactive_len_) {
        stage_ = NodeState::competing;
        phase_ = 1;
        pos_ = 0;
      }
      break;

    case NodeState::competing: {
      const double p = static_cast<double>(1ull << phase_) / (8.0 * cfg_.size_bound);
      info.action = rng.bernoulli(p) ? Action::beep : Action::listen;
      if (++pos_ == phase_len_) {
        pos_ = 0;
        if (++phase_ > log_n_) {
          stage_ = NodeState::mis;
          phase_ = 0;
          second_slot_ = false;
        }
      }
      break;
    }

    case NodeState::mis:
      if (!second_slot_) {
        const bool beep_first = rng.bernoulli(0.5);
        info.action = beep_first ? Action::beep : Action::listen;
        pending_ = beep_first ? Action::listen : Action::beep;
        second_slot_ = true;
      } else {
        info.action = pending_;
        second_slot_ = false;
      }
      break;
  }

  last_action_ = info.action;
  return info;
}

void FastMis::deliver(Observation obs) {
  if (obs == Observation::heard_beep) restart();
}

}  // namespace beep
