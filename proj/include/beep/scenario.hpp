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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "beep/types.hpp"

namespace beep {

// Static graph plus wake/crash schedule. The whole script is fixed before
// any randomness is drawn (oblivious adversary). Immutable once built.
class Scenario {
 public:
  using Edge = std::pair<NodeId, NodeId>;

  Scenario() : offsets_(1, 0) {}  // the empty scenario

  // Validates: simple undirected graph, no self loops, ids < node_count,
  // crash strictly after wake. Throws std::invalid_argument otherwise.
  static Scenario make(NodeId node_count, std::vector<Edge> edges,
                       std::vector<Round> wake_rounds,
                       std::map<NodeId, Round> crash_rounds = {});

  // All nodes wake at round 0, no crashes.
  static Scenario make_synchronous(NodeId node_count, std::vector<Edge> edges);

  NodeId node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {adjacency_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }
  NodeId degree(NodeId u) const {
    return static_cast<NodeId>(offsets_[u + 1] - offsets_[u]);
  }
  NodeId max_degree() const;

  Round wake_round(NodeId u) const { return wake_[u]; }
  std::optional<Round> crash_round(NodeId u) const {
    auto it = crash_.find(u);
    if (it == crash_.end()) return std::nullopt;
    return it->second;
  }
  const std::map<NodeId, Round>& crash_rounds() const { return crash_; }

  // Crash is instantaneous at the start of the crash round: the node neither
  // acts nor is heard from that round on.
  bool participating(NodeId u, Round t) const {
    if (t < wake_[u]) return false;
    auto it = crash_.find(u);
    return it == crash_.end() || t < it->second;
  }

  Round last_wake() const;
  // True if some wake or crash occurs at a round strictly greater than t.
  bool event_after(Round t) const;

  std::string to_json_string() const;
  static Scenario from_json_string(const std::string& text);
  void save_file(const std::string& path) const;
  static Scenario load_file(const std::string& path);

 private:
  NodeId node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;  // CSR adjacency
  std::vector<NodeId> adjacency_;
  std::vector<Round> wake_;
  std::map<NodeId, Round> crash_;
};

}  // namespace beep
