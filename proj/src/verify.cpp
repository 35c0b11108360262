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

#include "beep/verify.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace beep {

namespace {

bool part(const Trace& tr, NodeId u, Round t) { return tr.scenario->participating(u, t); }

NodeState st(const Trace& tr, Round t, NodeId u) { return tr.rounds[t][u].state; }

}  // namespace

MisVerdict check_mis(const Trace& trace, Round t) {
  MisVerdict v;
  const Scenario& s = *trace.scenario;
  const auto& row = trace.rounds[t];
  for (const auto& [a, b] : s.edges()) {
    if (!part(trace, a, t) || !part(trace, b, t)) continue;
    if (row[a].state == NodeState::mis && row[b].state == NodeState::mis) {
      v.independent = false;
      v.violations.push_back({t, a, b, "independence"});
    }
  }
  for (NodeId u = 0; u < s.node_count(); ++u) {
    if (!part(trace, u, t) || row[u].state == NodeState::mis) continue;
    bool covered = false;
    for (NodeId w : s.neighbors(u)) {
      if (part(trace, w, t) && row[w].state == NodeState::mis) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      v.maximal = false;
      v.violations.push_back({t, u, u, "maximality"});
    }
  }
  return v;
}

std::vector<std::vector<std::uint8_t>> stable_sets(const Trace& trace) {
  const Scenario& s = *trace.scenario;
  const NodeId n = s.node_count();
  std::vector<std::vector<std::uint8_t>> out(trace.rounds.size());
  for (Round t = 0; t < trace.rounds.size(); ++t) {
    auto& stable = out[t];
    stable.assign(n, 0);
    for (NodeId u = 0; u < n; ++u) {
      if (!part(trace, u, t) || st(trace, t, u) != NodeState::mis) continue;
      bool anchor = true;
      for (NodeId w : s.neighbors(u))
        if (part(trace, w, t) && st(trace, t, w) != NodeState::inactive) {
          anchor = false;
          break;
        }
      if (anchor) {
        stable[u] = 1;
        for (NodeId w : s.neighbors(u))
          if (part(trace, w, t)) stable[w] = 1;
      }
    }
  }
  return out;
}

std::optional<Round> stability_round(const Trace& trace, NodeId node) {
  const auto sets = stable_sets(trace);
  if (sets.empty() || !sets.back()[node]) return std::nullopt;
  Round r = trace.round_count() - 1;
  while (r > 0 && sets[r - 1][node]) --r;
  return r;
}

std::optional<Round> stabilization_round(const Trace& trace) {
  const auto sets = stable_sets(trace);
  const NodeId n = trace.scenario->node_count();
  auto all_stable = [&](Round t) {
    for (NodeId u = 0; u < n; ++u)
      if (part(trace, u, t) && !sets[t][u]) return false;
    return true;
  };
  if (sets.empty() || !all_stable(trace.round_count() - 1)) return std::nullopt;
  Round r = trace.round_count() - 1;
  while (r > 0 && all_stable(r - 1)) --r;
  return r;
}

double beep_potential(const Trace& trace, std::span<const NodeId> set, Round t) {
  double sum = 0.0;
  for (NodeId u : set) sum += trace.rounds[t][u].beep_prob;
  return sum;
}

namespace {

// Closed-neighborhood potentials for every round, built incrementally from
// per-node probability changes.
std::vector<std::vector<double>> closed_potentials(const Trace& trace) {
  const Scenario& s = *trace.scenario;
  const NodeId n = s.node_count();
  const Round T = trace.round_count();
  std::vector<std::vector<double>> e(T, std::vector<double>(n, 0.0));
  std::vector<double> prev(n, 0.0), cur(n, 0.0);
  for (Round t = 0; t < T; ++t) {
    if (t > 0) e[t] = e[t - 1];
    for (NodeId u = 0; u < n; ++u) {
      cur[u] = trace.rounds[t][u].beep_prob;
      const double d = cur[u] - prev[u];
      if (d != 0.0) {
        e[t][u] += d;
        for (NodeId w : s.neighbors(u)) e[t][w] += d;
      }
    }
    std::swap(prev, cur);
  }
  return e;
}

}  // namespace

std::vector<SlowChangeViolation> audit_slow_change(const Trace& trace,
                                                   std::span<const double> lambdas,
                                                   Round window,
                                                   std::size_t max_report) {
  std::vector<SlowChangeViolation> out;
  const NodeId n = trace.scenario->node_count();
  const Round T = trace.round_count();
  if (T == 0 || n == 0) return out;
  const auto e = closed_potentials(trace);

  for (NodeId v = 0; v < n; ++v) {
    // sliding minimum of e[.][v] over [t - window, t]
    std::deque<Round> dq;
    for (Round t = 0; t < T; ++t) {
      while (!dq.empty() && e[dq.back()][v] >= e[t][v]) dq.pop_back();
      dq.push_back(t);
      if (dq.front() + window < t) dq.pop_front();
      const double mn = e[dq.front()][v];
      for (double lambda : lambdas) {
        if (e[t][v] >= lambda && mn < lambda / 2 - 0.125 - 1e-9) {
          if (out.size() < max_report)
            out.push_back({v, t, dq.front(), lambda, e[t][v], mn});
          else
            return out;
        }
      }
    }
  }
  return out;
}

double competing_potential_stat(const Trace& trace) {
  const NodeId n = trace.scenario->node_count();
  const Round T = trace.round_count();
  if (T == 0 || n == 0) return 0.0;
  const auto e = closed_potentials(trace);
  std::uint64_t competing = 0, high = 0;
  for (Round t = 0; t < T; ++t)
    for (NodeId v = 0; v < n; ++v) {
      if (trace.rounds[t][v].state != NodeState::competing || !part(trace, v, t)) continue;
      ++competing;
      const double open = e[t][v] - trace.rounds[t][v].beep_prob;
      if (open >= 0.5) ++high;
    }
  return competing == 0 ? 0.0 : static_cast<double>(high) / static_cast<double>(competing);
}

std::vector<KPropViolation> check_k_propagation(const Trace& trace,
                                                std::size_t max_report) {
  std::vector<KPropViolation> out;
  const Scenario& s = *trace.scenario;
  const Round T = trace.round_count();
  const NodeId n = s.node_count();

  // change points of the (monotone) k series per node
  std::vector<std::vector<std::pair<Round, std::uint64_t>>> steps(n);
  for (NodeId u = 0; u < n; ++u) {
    std::uint64_t last = 0;
    for (Round t = 0; t < T; ++t) {
      const std::uint64_t k = trace.rounds[t][u].k;
      if (k != 0 && k != last) {
        steps[u].push_back({t, k});
        last = k;
      }
    }
  }
  auto first_reach = [&](NodeId u, std::uint64_t target) -> std::optional<Round> {
    for (const auto& [t, k] : steps[u])
      if (k >= target) return t;
    return std::nullopt;
  };
  auto alive_until = [&](NodeId u) {
    auto cr = s.crash_round(u);
    return cr ? *cr : T;
  };

  for (const auto& [a, b] : s.edges()) {
    for (auto [fast, slow] : {std::pair{a, b}, std::pair{b, a}}) {
      const Round live = std::min(alive_until(fast), alive_until(slow));
      for (Round t = 0; t < std::min(T, live); ++t) {
        const std::uint64_t kf = trace.rounds[t][fast].k;
        const std::uint64_t ks = trace.rounds[t][slow].k;
        if (kf == 0 || ks == 0 || kf <= ks) continue;
        if (t + 2 * kf >= std::min(T, live)) break;  // window not fully observable
        auto reach = first_reach(slow, kf);
        if (!reach || *reach > t + 2 * kf) {
          out.push_back({fast, slow, t, kf});
          if (out.size() >= max_report) return out;
          break;  // report each edge direction once
        }
      }
    }
  }
  return out;
}

AdjacentMisReport adjacent_mis_report(const Trace& trace) {
  AdjacentMisReport rep;
  const Scenario& s = *trace.scenario;
  const Round T = trace.round_count();

  // entry round of the current MIS stretch per node
  const NodeId n = s.node_count();
  std::vector<Round> entry(n, 0);
  std::vector<std::uint64_t> entry_k(n, 0);

  std::map<std::pair<NodeId, NodeId>, Round> open;  // episode start per edge
  std::vector<NodeState> prev(n, NodeState::inactive);

  for (Round t = 0; t < T; ++t) {
    const auto& row = trace.rounds[t];
    for (NodeId u = 0; u < n; ++u) {
      if (row[u].state == NodeState::mis && prev[u] != NodeState::mis) {
        entry[u] = t;
        entry_k[u] = row[u].k;
      }
      prev[u] = row[u].state;
    }
    bool any = false;
    for (const auto& [a, b] : s.edges()) {
      const bool co = part(trace, a, t) && part(trace, b, t) &&
                      row[a].state == NodeState::mis && row[b].state == NodeState::mis;
      auto key = std::make_pair(a, b);
      auto it = open.find(key);
      if (co) {
        any = true;
        if (row[a].k != row[b].k) ++rep.unequal_k_rounds;
        if (it == open.end()) {
          open[key] = t;
          ++rep.episodes;
          if (entry[a] != entry[b] || entry_k[a] != entry_k[b]) ++rep.entry_violations;
        }
      } else if (it != open.end()) {
        rep.max_episode_len = std::max(rep.max_episode_len, t - it->second);
        open.erase(it);
      }
    }
    if (any) rep.any_co_mis_round = true;
  }
  for (const auto& [key, start] : open) {
    ++rep.unresolved;
    rep.max_episode_len = std::max(rep.max_episode_len, T - start);
  }
  return rep;
}

}  // namespace beep
