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
#include <string_view>

namespace beep {

using NodeId = std::uint32_t;
using Round = std::uint64_t;

// What a node did in a round. `asleep` covers both not-yet-woken and crashed.
enum class Action : std::uint8_t { listen = 0, beep = 1, asleep = 2 };

// What a node perceived. Beeping and sleeping nodes get `none`; a listener
// distinguishes only silence from at-least-one neighboring beep.
enum class Observation : std::uint8_t { none = 0, silence = 1, heard_beep = 2 };

enum class NodeState : std::uint8_t { inactive = 0, competing = 1, mis = 2 };

constexpr std::string_view to_string(Action a) {
  switch (a) {
    case Action::listen: return "listen";
    case Action::beep: return "beep";
    case Action::asleep: return "asleep";
  }
  return "?";
}

constexpr std::string_view to_string(Observation o) {
  switch (o) {
    case Observation::none: return "none";
    case Observation::silence: return "silence";
    case Observation::heard_beep: return "heard-beep";
  }
  return "?";
}

constexpr std::string_view to_string(NodeState s) {
  switch (s) {
    case NodeState::inactive: return "inactive";
    case NodeState::competing: return "competing";
    case NodeState::mis: return "mis";
  }
  return "?";
}

}  // namespace beep
