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
#include <optional>
#include <string>
#include <vector>

#include "beep/protocol.hpp"
#include "beep/scenario.hpp"

namespace beep {

// Fixed per-node behavior for the adversarial constructions: either listen
// forever, or listen for ell-1 rounds after waking and beep with
// probability p in round ell, listening from then on.
struct UniformBehavior {
  enum class Mode { silent_forever, beep_after } mode = Mode::silent_forever;
  std::uint32_t ell = 1;
  double p = 0.5;
};

class UniformBehaviorProtocol final : public Protocol {
 public:
  UniformBehaviorProtocol(UniformBehavior b, Round wake) : b_(b), wake_(wake) {}
  StepInfo act(Round t, Rng& rng) override;
  void deliver(Observation) override {}
  NodeState state() const override { return NodeState::inactive; }

 private:
  UniformBehavior b_;
  Round wake_;
};

enum class GraphFamily { complete, path, ring, grid, gnp };

struct WakePolicy {
  enum class Kind { synchronous, staggered, random, simple_wakeup } kind = Kind::synchronous;
  Round spacing = 1;   // staggered: node i wakes at i * spacing
  Round window = 1;    // random: uniform wake in [0, window)
  Round delta = 8;     // simple_wakeup: new nodes join delta rounds apart
};

struct GenParams {
  double p = 0.5;            // gnp edge probability
  std::uint64_t seed = 1;    // generator randomness (gnp edges, random wakes)
};

Scenario gen_standard(GraphFamily family, NodeId n, const GenParams& params,
                      const WakePolicy& wake);

// Incrementally grown random graph: a small synchronous seed clique, then
// one node at a time attaching to 1..max_attach uniformly chosen existing
// nodes, waking `delta` rounds after the previous node. If delta == 0 it is
// set to 2 * ceil(log2(max_degree)) of the built graph.
Scenario gen_grown(NodeId n, NodeId seed_size, NodeId max_attach, Round delta,
                   std::uint64_t seed);

// Largest delta such that every node woken after round 0 has a neighbor
// woken at least delta rounds earlier; 0 if some late node has none, nullopt
// if no node wakes late (the guarantee is vacuous).
std::optional<Round> simple_wakeup_delta(const Scenario& s);

struct SimpleWakeupViolation {
  NodeId node;
  std::string reason;
};
// Checks the growth restriction at level `delta`, including that crashed
// nodes have only old neighbors at the crash round.
std::vector<SimpleWakeupViolation> validate_simple_wakeup(const Scenario& s, Round delta);

// Staggered-clique lower-bound construction, first case: cliques C_1..C_{k-1}
// of size k*scale*ceil(1/p), each split into k sub-cliques C_i(j) of size
// scale*ceil(1/p); cliques U_1..U_k of size scale; U_j joined completely to
// C_i(j) for every i. C_i wakes at round i, all U at round ell. C nodes run
// beep-after(ell, p), U nodes stay silent.
struct Case1Scenario {
  Scenario scenario;
  std::vector<UniformBehavior> behaviors;  // per node
  std::uint32_t k = 0, scale = 0, sub_size = 0;
  std::uint32_t ell = 1;
  double p = 0.5;
  // node layout
  NodeId c_node(std::uint32_t i, std::uint32_t j, std::uint32_t idx) const;  // i in [1,k-1], j in [1,k]
  NodeId u_node(std::uint32_t j, std::uint32_t idx) const;                   // j in [1,k]
  NodeId u_begin() const;
};
Case1Scenario gen_case1(std::uint32_t k, std::uint32_t ell, double p, std::uint32_t scale);

// Second case: cliques U_1..U_k of size scale*ceil(1/p'), S_1..S_{m-1} of
// size scale*ceil(1/p); U_j joined to U_i for i in [max(1,j-q), j-1] with
// q = floor(k/4); for j < m also to S_h for h in [max(1,m-j), m-1]. S_i
// wakes at round i, U_j at round ell+j. S runs beep-after(ell, p), U runs
// beep-after(m, p').
struct Case2Scenario {
  Scenario scenario;
  std::vector<UniformBehavior> behaviors;
  std::uint32_t k = 0, m = 0, q = 0;
  std::uint32_t u_size = 0, s_size = 0;
  NodeId u_node(std::uint32_t j, std::uint32_t idx) const;  // j in [1,k]
  NodeId s_node(std::uint32_t h, std::uint32_t idx) const;  // h in [1,m-1]
};
Case2Scenario gen_case2(std::uint32_t k, std::uint32_t m, std::uint32_t ell, double p,
                        double p_prime, std::uint32_t scale);

}  // namespace beep
