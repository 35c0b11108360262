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

#include "beep/kernel.hpp"

#include <stdexcept>

namespace beep {

std::vector<Observation> deliver_observations(
    const Scenario& scenario, Round t,
    const std::vector<std::optional<Action>>& actions) {
  const NodeId n = scenario.node_count();
  if (actions.size() != n)
    throw std::invalid_argument("kernel: one action slot per node required");
  for (NodeId u = 0; u < n; ++u) {
    const bool part = scenario.participating(u, t);
    if (actions[u].has_value() && !part)
      throw std::invalid_argument(
          "kernel: node acting before its wake round or after its crash round");
    if (!actions[u].has_value() && part)
      throw std::invalid_argument("kernel: participating node supplied no action");
  }

  std::vector<Observation> obs(n, Observation::none);
  for (NodeId u = 0; u < n; ++u) {
    if (!actions[u] || *actions[u] != Action::listen) continue;
    Observation o = Observation::silence;
    for (NodeId v : scenario.neighbors(u)) {
      if (actions[v] && *actions[v] == Action::beep) {
        o = Observation::heard_beep;
        break;
      }
    }
    obs[u] = o;
  }
  return obs;
}

Simulation::Simulation(std::shared_ptr<const Scenario> scenario,
                       ProtocolFactory factory, std::uint64_t seed, bool record_trace)
    : scenario_(std::move(scenario)),
      factory_(std::move(factory)),
      seed_(seed),
      record_(record_trace) {
  const NodeId n = scenario_->node_count();
  protocols_.resize(n);
  rngs_.resize(n);
  states_.assign(n, NodeState::inactive);
  row_.assign(n, RoundRecord{});
  beep_stamp_.assign(n, 0);
  trace_.scenario = scenario_;
  trace_.seed = seed;
}

void Simulation::step() {
  const Round t = next_round_;
  const NodeId n = scenario_->node_count();
  bool changed = false;

  for (NodeId u = 0; u < n; ++u) {
    RoundRecord& rec = row_[u];
    rec = RoundRecord{};
    if (!scenario_->participating(u, t)) {
      if (protocols_[u] && scenario_->crash_round(u) && t >= *scenario_->crash_round(u)) {
        protocols_[u].reset();  // crashed nodes stop acting permanently
        changed = true;
      }
      continue;
    }
    if (!protocols_[u]) {
      rngs_[u].emplace(seed_, u);
      protocols_[u] = factory_(u, scenario_->wake_round(u));
      changed = true;
    }
    StepInfo info = protocols_[u]->act(t, *rngs_[u]);
    rec.action = info.action;
    rec.beep_prob = info.beep_prob;
    rec.k = info.k;
    rec.levels = info.levels;
    rec.state = info.state;
    if (states_[u] != info.state) {
      states_[u] = info.state;
      changed = true;
    }
  }

  // Second phase: collect OR-collision observations, then deliver.
  for (NodeId u = 0; u < n; ++u) {
    if (row_[u].action != Action::beep) continue;
    for (NodeId v : scenario_->neighbors(u)) beep_stamp_[v] = t + 1;
  }
  for (NodeId u = 0; u < n; ++u) {
    if (!protocols_[u] || !scenario_->participating(u, t)) continue;
    Observation o = Observation::none;
    if (row_[u].action == Action::listen)
      o = (beep_stamp_[u] == t + 1) ? Observation::heard_beep : Observation::silence;
    row_[u].observation = o;
    protocols_[u]->deliver(o);
  }

  dirty_ = changed;
  if (record_) trace_.rounds.push_back(row_);
  ++next_round_;
}

bool Simulation::all_stable() const {
  if (next_round_ == 0) return false;
  const Round t = next_round_ - 1;
  const NodeId n = scenario_->node_count();

  // Anchors: MIS nodes whose participating neighbors are all inactive.
  // Rule two extends stability exactly one hop from an anchor, and every
  // such neighbor is inactive by the anchor condition, so no iteration is
  // needed to reach the fixpoint.
  std::vector<std::uint8_t> stable(n, 0);
  for (NodeId u = 0; u < n; ++u) {
    if (!scenario_->participating(u, t) || states_[u] != NodeState::mis) continue;
    bool anchor = true;
    for (NodeId v : scenario_->neighbors(u)) {
      if (scenario_->participating(v, t) && states_[v] != NodeState::inactive) {
        anchor = false;
        break;
      }
    }
    if (anchor) {
      stable[u] = 1;
      for (NodeId v : scenario_->neighbors(u))
        if (scenario_->participating(v, t)) stable[v] = 1;
    }
  }
  for (NodeId u = 0; u < n; ++u)
    if (scenario_->participating(u, t) && !stable[u]) return false;
  return true;
}

bool Simulation::events_pending() const {
  return next_round_ == 0 || scenario_->event_after(next_round_ - 1);
}

Trace Simulation::take_trace() { return std::move(trace_); }

Trace run(std::shared_ptr<const Scenario> scenario, const ProtocolFactory& factory,
          std::uint64_t seed, Round cap) {
  Simulation sim(std::move(scenario), factory, seed);
  for (Round t = 0; t < cap; ++t) sim.step();
  Trace tr = sim.take_trace();
  if (tr.scenario->node_count() == 0) tr.rounds.clear();
  return tr;
}

RunOutcome run_until_stable(std::shared_ptr<const Scenario> scenario,
                            const ProtocolFactory& factory, std::uint64_t seed,
                            Round cap, bool record_trace) {
  RunOutcome out;
  Simulation sim(scenario, factory, seed, record_trace);
  bool stable_memo = false;
  for (Round t = 0; t < cap; ++t) {
    sim.step();
    if (sim.state_changed_last_round() || !stable_memo) {
      stable_memo = sim.all_stable();
      if (stable_memo) {
        if (!out.stabilization) out.stabilization = t;
      } else {
        out.stabilization.reset();
      }
    }
    // Once every participating node is stable and no wake or crash is still
    // scheduled, the suffix is determined: stable configurations persist.
    if (stable_memo && !sim.events_pending()) break;
  }
  if (scenario->node_count() == 0) out.stabilization = 0;
  out.timed_out = !out.stabilization.has_value();
  out.trace = sim.take_trace();
  if (scenario->node_count() == 0) out.trace.rounds.clear();
  return out;
}

}  // namespace beep
