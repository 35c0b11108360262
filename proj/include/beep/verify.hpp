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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "beep/trace.hpp"

namespace beep {

struct MisViolation {
  Round round;
  NodeId a;
  NodeId b;  // == a for maximality violations
  std::string rule;
};

struct MisVerdict {
  bool independent = true;
  bool maximal = true;
  std::vector<MisViolation> violations;
};

// Independence and maximality of the MIS-state node set among nodes
// participating at round t.
MisVerdict check_mis(const Trace& trace, Round t);

// Stability per round: a node is stable when it is in the MIS with every
// participating neighbor inactive, or when it has such a neighbor. Returns
// one flag vector per round.
std::vector<std::vector<std::uint8_t>> stable_sets(const Trace& trace);

// Earliest round from which the node stays stable for the rest of the
// trace; nullopt if it is not stable at the end.
std::optional<Round> stability_round(const Trace& trace, NodeId node);

// First round of the terminal suffix in which every participating node is
// stable; nullopt if the last round is not fully stable.
std::optional<Round> stabilization_round(const Trace& trace);

double beep_potential(const Trace& trace, std::span<const NodeId> set, Round t);

struct SlowChangeViolation {
  NodeId center;
  Round t;
  Round t_prime;
  double lambda;
  double potential_t;
  double potential_t_prime;
};

// Checks, over closed neighborhoods, that a potential of at least lambda at
// round t implies at least lambda/2 - 1/8 throughout [t - window, t].
std::vector<SlowChangeViolation> audit_slow_change(const Trace& trace,
                                                   std::span<const double> lambdas,
                                                   Round window,
                                                   std::size_t max_report = 16);

// Fraction of (node, round) pairs with the node competing while its open
// neighborhood's potential is at least one half.
double competing_potential_stat(const Trace& trace);

struct KPropViolation {
  NodeId fast;    // node with the larger parameter
  NodeId slow;
  Round t;
  std::uint64_t k;
};

// Whenever adjacent nodes disagree on k, the smaller one must catch up
// within two times the larger k, both staying alive that long.
std::vector<KPropViolation> check_k_propagation(const Trace& trace,
                                                std::size_t max_report = 16);

struct AdjacentMisReport {
  std::uint64_t episodes = 0;        // maximal intervals of an edge with both ends MIS
  std::uint64_t entry_violations = 0;  // episode starting with unequal entry rounds or ks
  std::uint64_t unequal_k_rounds = 0;  // edge-rounds, both MIS, current ks differ
  std::uint64_t unresolved = 0;      // episodes still open at trace end
  Round max_episode_len = 0;
  bool any_co_mis_round = false;
};

AdjacentMisReport adjacent_mis_report(const Trace& trace);

}  // namespace beep
