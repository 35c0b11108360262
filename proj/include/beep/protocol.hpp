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

#include <functional>
#include <memory>

#include "beep/rng.hpp"
#include "beep/types.hpp"

namespace beep {

struct StepInfo {
  Action action = Action::listen;
  float beep_prob = 0.0f;
  NodeState state = NodeState::inactive;
  std::uint32_t k = 0;
  std::int8_t levels = -1;
};

// A per-node state machine. act() is called once per round for every
// participating node (phase one); deliver() follows after all actions of the
// round were collected (phase two). A beeping node is delivered
// Observation::none.
class Protocol {
 public:
  virtual ~Protocol() = default;
  virtual StepInfo act(Round t, Rng& rng) = 0;
  virtual void deliver(Observation obs) = 0;
  virtual NodeState state() const = 0;
};

using ProtocolFactory =
    std::function<std::unique_ptr<Protocol>(NodeId node, Round wake_round)>;

}  // namespace beep
