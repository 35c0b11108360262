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

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "beep/protocol.hpp"
#include "beep/scenario.hpp"
#include "beep/trace.hpp"

namespace beep {

// OR-collision delivery for one round. actions[u] must be set exactly for
// the nodes participating at t; supplying an action for a node before its
// wake round or at/after its crash round throws std::invalid_argument, as
// does omitting a participant. A listener observes heard_beep iff at least
// one neighbor participating at t beeps; beeping and absent nodes get none.
std::vector<Observation> deliver_observations(
    const Scenario& scenario, Round t,
    const std::vector<std::optional<Action>>& actions);

// Steps a full run round by round: instantiates each node's protocol at its
// wake round, collects actions, delivers observations, records rows.
class Simulation {
 public:
  Simulation(std::shared_ptr<const Scenario> scenario, ProtocolFactory factory,
             std::uint64_t seed, bool record_trace = true);

  void step();  // advances one round
  Round round() const { return next_round_; }

  const std::vector<RoundRecord>& last_row() const { return row_; }
  // Current protocol state per node (valid for participating nodes).
  const std::vector<NodeState>& states() const { return states_; }
  bool state_changed_last_round() const { return dirty_; }

  // True when every node participating at the last stepped round is stable:
  // stable = in the MIS with all participating neighbors inactive, or
  // adjacent to such a node. Only MIS-anchored chains confer stability.
  bool all_stable() const;

  bool events_pending() const;  // wake or crash strictly after current round

  Trace take_trace();

 private:
  std::shared_ptr<const Scenario> scenario_;
  ProtocolFactory factory_;
  std::uint64_t seed_;
  bool record_;
  Round next_round_ = 0;
  std::vector<std::unique_ptr<Protocol>> protocols_;
  std::vector<std::optional<Rng>> rngs_;
  std::vector<NodeState> states_;
  std::vector<RoundRecord> row_;
  std::vector<Round> beep_stamp_;  // round+1 of last neighbor beep, per node
  bool dirty_ = true;
  Trace trace_;
};

// Convenience wrapper: runs `cap` rounds (or fewer if `stop_when_stable`
// and the network stabilized with no pending wake/crash events).
Trace run(std::shared_ptr<const Scenario> scenario, const ProtocolFactory& factory,
          std::uint64_t seed, Round cap);

struct RunOutcome {
  Trace trace;
  std::optional<Round> stabilization;  // first round of the terminal all-stable suffix
  bool timed_out = false;
};

RunOutcome run_until_stable(std::shared_ptr<const Scenario> scenario,
                            const ProtocolFactory& factory, std::uint64_t seed,
                            Round cap, bool record_trace = true);

}  // namespace beep
