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

#include "beep/trace.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace beep {

namespace {

NodeState state_from(const std::string& s) {
  if (s == "inactive") return NodeState::inactive;
  if (s == "competing") return NodeState::competing;
  if (s == "mis") return NodeState::mis;
  throw std::invalid_argument("trace: bad state " + s);
}

Action action_from(const std::string& s) {
  if (s == "listen") return Action::listen;
  if (s == "beep") return Action::beep;
  if (s == "asleep") return Action::asleep;
  throw std::invalid_argument("trace: bad action " + s);
}

Observation obs_from(const std::string& s) {
  if (s == "none") return Observation::none;
  if (s == "silence") return Observation::silence;
  if (s == "heard-beep") return Observation::heard_beep;
  throw std::invalid_argument("trace: bad observation " + s);
}

}  // namespace

void Trace::write_csv(std::ostream& out) const {
  out << "round,node,state,action,observation,beep_prob\n";
  char buf[64];
  for (Round t = 0; t < rounds.size(); ++t) {
    const auto& row = rounds[t];
    for (NodeId u = 0; u < row.size(); ++u) {
      const RoundRecord& r = row[u];
      std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(r.beep_prob));
      out << t << ',' << u << ',' << to_string(r.state) << ',' << to_string(r.action)
          << ',' << to_string(r.observation) << ',' << buf << '\n';
    }
  }
}

Trace Trace::read_csv(std::istream& in, std::shared_ptr<const Scenario> scenario) {
  Trace tr;
  tr.scenario = std::move(scenario);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("trace: empty file");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    auto next = [&]() {
      if (!std::getline(ls, field, ',')) throw std::invalid_argument("trace: short row");
      return field;
    };
    Round t = std::stoull(next());
    NodeId u = static_cast<NodeId>(std::stoul(next()));
    RoundRecord rec;
    rec.state = state_from(next());
    rec.action = action_from(next());
    rec.observation = obs_from(next());
    rec.beep_prob = std::stof(next());
    if (tr.rounds.size() <= t) tr.rounds.resize(t + 1);
    if (tr.rounds[t].size() <= u) tr.rounds[t].resize(u + 1);
    tr.rounds[t][u] = rec;
  }
  return tr;
}

std::uint64_t Trace::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 0x100000001b3ULL;
  };
  for (const auto& row : rounds) {
    for (const RoundRecord& r : row) {
      std::uint32_t pb;
      static_assert(sizeof(pb) == sizeof(r.beep_prob));
      __builtin_memcpy(&pb, &r.beep_prob, sizeof(pb));
      mix(pb);
      mix(r.k);
      mix(static_cast<std::uint64_t>(r.state) | (static_cast<std::uint64_t>(r.action) << 8) |
          (static_cast<std::uint64_t>(r.observation) << 16) |
          (static_cast<std::uint64_t>(static_cast<std::uint8_t>(r.levels)) << 24));
    }
  }
  return h;
}

}  // namespace beep
