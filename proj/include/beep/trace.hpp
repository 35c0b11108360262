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
#include <iosfwd>
#include <memory>
#include <vector>

#include "beep/scenario.hpp"
#include "beep/types.hpp"

namespace beep {

// Per node per round. `beep_prob` is the probability the protocol declared
// for beeping this round (the quantity beep-potential analysis sums).
// `k` and `levels` are protocol-specific extras: k is the synchronization
// parameter of the triple/block protocols (0 when not applicable), `levels`
// the number of decoded time levels (-1 when not applicable, 62 = full
// knowledge).
struct RoundRecord {
  float beep_prob = 0.0f;
  std::uint32_t k = 0;
  NodeState state = NodeState::inactive;
  Action action = Action::asleep;
  Observation observation = Observation::none;
  std::int8_t levels = -1;
};

// Full record of one seeded run. Replaying (scenario, seed) reproduces it
// bit for bit.
struct Trace {
  std::shared_ptr<const Scenario> scenario;
  std::uint64_t seed = 0;
  std::vector<std::vector<RoundRecord>> rounds;  // [round][node]

  Round round_count() const { return rounds.size(); }

  // One row per (round, node): round,node,state,action,observation,beep_prob
  void write_csv(std::ostream& out) const;

  // Parses the CSV form above back into records (k/levels are not part of
  // the tabular format and come back as defaults).
  static Trace read_csv(std::istream& in, std::shared_ptr<const Scenario> scenario);

  std::uint64_t digest() const;  // FNV-1a over all records
};

}  // namespace beep
