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

#include "beep/scenarios.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "beep/rng.hpp"

namespace beep {

StepInfo UniformBehaviorProtocol::act(Round t, Rng& rng) {
  StepInfo info;
  info.state = NodeState::inactive;
  const Round rel = t - wake_ + 1;  // wake-relative round, 1-based
  if (b_.mode == UniformBehavior::Mode::beep_after && rel == b_.ell) {
    info.beep_prob = static_cast<float>(b_.p);
    info.action = rng.bernoulli(b_.p) ? Action::beep : Action::listen;
  } else {
    info.action = Action::listen;
  }
  return info;
}

namespace {

std::vector<Scenario::Edge> family_edges(GraphFamily family, NodeId n,
                                         const GenParams& params) {
  std::vector<Scenario::Edge> edges;
  switch (family) {
    case GraphFamily::complete:
      for (NodeId a = 0; a < n; ++a)
        for (NodeId b = a + 1; b < n; ++b) edges.push_back({a, b});
      break;
    case GraphFamily::path:
      for (NodeId a = 0; a + 1 < n; ++a) edges.push_back({a, static_cast<NodeId>(a + 1)});
      break;
    case GraphFamily::ring:
      if (n < 3) throw std::invalid_argument("scenarios: ring needs n >= 3");
      for (NodeId a = 0; a + 1 < n; ++a) edges.push_back({a, static_cast<NodeId>(a + 1)});
      edges.push_back({0, static_cast<NodeId>(n - 1)});
      break;
    case GraphFamily::grid: {
      const NodeId side = static_cast<NodeId>(std::lround(std::sqrt(double(n))));
      if (side * side != n)
        throw std::invalid_argument("scenarios: grid needs a square node count");
      for (NodeId r = 0; r < side; ++r)
        for (NodeId c = 0; c < side; ++c) {
          const NodeId u = r * side + c;
          if (c + 1 < side) edges.push_back({u, static_cast<NodeId>(u + 1)});
          if (r + 1 < side) edges.push_back({u, static_cast<NodeId>(u + side)});
        }
      break;
    }
    case GraphFamily::gnp: {
      if (params.p < 0.0 || params.p > 1.0)
        throw std::invalid_argument("scenarios: gnp probability out of range");
      Rng rng(params.seed, 0xa11ce);
      for (NodeId a = 0; a < n; ++a)
        for (NodeId b = a + 1; b < n; ++b)
          if (rng.bernoulli(params.p)) edges.push_back({a, b});
      break;
    }
  }
  return edges;
}

}  // namespace

Scenario gen_standard(GraphFamily family, NodeId n, const GenParams& params,
                      const WakePolicy& wake) {
  auto edges = family_edges(family, n, params);
  std::vector<Round> wakes(n, 0);
  switch (wake.kind) {
    case WakePolicy::Kind::synchronous:
      break;
    case WakePolicy::Kind::staggered:
      for (NodeId u = 0; u < n; ++u) wakes[u] = static_cast<Round>(u) * wake.spacing;
      break;
    case WakePolicy::Kind::random: {
      Rng rng(params.seed, 0x3a4e);
      for (NodeId u = 0; u < n; ++u) wakes[u] = rng.below(std::max<Round>(1, wake.window));
      break;
    }
    case WakePolicy::Kind::simple_wakeup: {
      // Grow along a BFS forest so each late node has a neighbor woken
      // delta rounds earlier. Roots wake at round 0.
      const Scenario shape = Scenario::make_synchronous(n, edges);
      std::vector<char> seen(n, 0);
      Round next_wake = 0;
      std::vector<NodeId> queue;
      for (NodeId root = 0; root < n; ++root) {
        if (seen[root]) continue;
        seen[root] = 1;
        wakes[root] = 0;
        queue.push_back(root);
        while (!queue.empty()) {
          NodeId u = queue.front();
          queue.erase(queue.begin());
          for (NodeId v : shape.neighbors(u)) {
            if (seen[v]) continue;
            seen[v] = 1;
            next_wake = std::max(next_wake + wake.delta, wakes[u] + wake.delta);
            wakes[v] = next_wake;
            queue.push_back(v);
          }
        }
      }
      break;
    }
  }
  return Scenario::make(n, std::move(edges), std::move(wakes));
}

Scenario gen_grown(NodeId n, NodeId seed_size, NodeId max_attach, Round delta,
                   std::uint64_t seed) {
  if (n < 1 || seed_size < 1 || seed_size > n || max_attach < 1)
    throw std::invalid_argument("scenarios: bad grown-graph parameters");
  Rng rng(seed, 0x9e0e);
  std::vector<Scenario::Edge> edges;
  for (NodeId a = 0; a < seed_size; ++a)
    for (NodeId b = a + 1; b < seed_size; ++b) edges.push_back({a, b});
  for (NodeId v = seed_size; v < n; ++v) {
    const NodeId want = 1 + static_cast<NodeId>(rng.below(max_attach));
    std::vector<NodeId> targets;
    for (NodeId i = 0; i < want && i < v; ++i) {
      NodeId u;
      do {
        u = static_cast<NodeId>(rng.below(v));
      } while (std::find(targets.begin(), targets.end(), u) != targets.end());
      targets.push_back(u);
      edges.push_back({u, v});
    }
  }
  std::vector<Round> wakes(n, 0);
  if (delta == 0) {
    const Scenario shape = Scenario::make_synchronous(n, edges);
    const NodeId dmax = std::max<NodeId>(2, shape.max_degree());
    delta = 2 * static_cast<Round>(std::bit_width(dmax - 1));
  }
  for (NodeId v = seed_size; v < n; ++v)
    wakes[v] = static_cast<Round>(v - seed_size + 1) * delta;
  return Scenario::make(n, std::move(edges), std::move(wakes));
}

std::optional<Round> simple_wakeup_delta(const Scenario& s) {
  std::optional<Round> best;
  for (NodeId v = 0; v < s.node_count(); ++v) {
    if (s.wake_round(v) == 0) continue;
    // the guarantee this node enjoys is its largest gap to an older neighbor
    Round gap = 0;
    for (NodeId u : s.neighbors(v))
      if (s.wake_round(u) < s.wake_round(v))
        gap = std::max(gap, s.wake_round(v) - s.wake_round(u));
    best = best ? std::min(*best, gap) : gap;
  }
  return best;
}

std::vector<SimpleWakeupViolation> validate_simple_wakeup(const Scenario& s, Round delta) {
  std::vector<SimpleWakeupViolation> out;
  for (NodeId v = 0; v < s.node_count(); ++v) {
    if (s.wake_round(v) > 0) {
      bool ok = false;
      for (NodeId u : s.neighbors(v)) {
        if (s.wake_round(u) + delta <= s.wake_round(v)) {
          ok = true;
          break;
        }
      }
      if (!ok) out.push_back({v, "no neighbor awake delta rounds before wake"});
    }
    if (auto cr = s.crash_round(v)) {
      for (NodeId u : s.neighbors(v)) {
        if (s.wake_round(u) + delta > *cr) {
          out.push_back({v, "crash while a neighbor is still young"});
          break;
        }
      }
    }
  }
  return out;
}

NodeId Case1Scenario::c_node(std::uint32_t i, std::uint32_t j, std::uint32_t idx) const {
  const std::uint32_t c_size = k * sub_size;
  return (i - 1) * c_size + (j - 1) * sub_size + idx;
}

NodeId Case1Scenario::u_begin() const { return (k - 1) * k * sub_size; }

NodeId Case1Scenario::u_node(std::uint32_t j, std::uint32_t idx) const {
  return u_begin() + (j - 1) * scale + idx;
}

Case1Scenario gen_case1(std::uint32_t k, std::uint32_t ell, double p, std::uint32_t scale) {
  if (k <= ell) throw std::invalid_argument("case1: requires k > ell >= 1");
  if (ell < 1 || scale < 1 || p <= 0.0 || p > 1.0)
    throw std::invalid_argument("case1: bad parameters");

  Case1Scenario cs;
  cs.k = k;
  cs.scale = scale;
  cs.ell = ell;
  cs.p = p;
  cs.sub_size = scale * static_cast<std::uint32_t>(std::ceil(1.0 / p));

  const NodeId c_total = (k - 1) * k * cs.sub_size;
  const NodeId n = c_total + k * scale;
  std::vector<Scenario::Edge> edges;

  // C_i cliques (k sub-cliques each, but the whole C_i is one clique)
  for (std::uint32_t i = 1; i <= k - 1; ++i) {
    const NodeId base = cs.c_node(i, 1, 0);
    const NodeId size = k * cs.sub_size;
    for (NodeId a = 0; a < size; ++a)
      for (NodeId b = a + 1; b < size; ++b)
        edges.push_back({base + a, base + b});
  }
  // U_j cliques
  for (std::uint32_t j = 1; j <= k; ++j) {
    const NodeId base = cs.u_node(j, 0);
    for (NodeId a = 0; a < scale; ++a)
      for (NodeId b = a + 1; b < scale; ++b) edges.push_back({base + a, base + b});
  }
  // complete bipartite U_j -- C_i(j)
  for (std::uint32_t j = 1; j <= k; ++j)
    for (std::uint32_t i = 1; i <= k - 1; ++i)
      for (std::uint32_t a = 0; a < cs.sub_size; ++a)
        for (std::uint32_t b = 0; b < scale; ++b)
          edges.push_back({cs.c_node(i, j, a), cs.u_node(j, b)});

  std::vector<Round> wakes(n, 0);
  for (std::uint32_t i = 1; i <= k - 1; ++i)
    for (NodeId a = 0; a < k * cs.sub_size; ++a) wakes[cs.c_node(i, 1, 0) + a] = i;
  for (std::uint32_t j = 1; j <= k; ++j)
    for (NodeId a = 0; a < scale; ++a) wakes[cs.u_node(j, a)] = ell;

  cs.behaviors.assign(n, UniformBehavior{UniformBehavior::Mode::silent_forever, 1, p});
  for (NodeId u = 0; u < c_total; ++u)
    cs.behaviors[u] = UniformBehavior{UniformBehavior::Mode::beep_after, ell, p};

  cs.scenario = Scenario::make(n, std::move(edges), std::move(wakes));
  return cs;
}

NodeId Case2Scenario::u_node(std::uint32_t j, std::uint32_t idx) const {
  return (j - 1) * u_size + idx;
}

NodeId Case2Scenario::s_node(std::uint32_t h, std::uint32_t idx) const {
  return k * u_size + (h - 1) * s_size + idx;
}

Case2Scenario gen_case2(std::uint32_t k, std::uint32_t m, std::uint32_t ell, double p,
                        double p_prime, std::uint32_t scale) {
  if (k <= 4) throw std::invalid_argument("case2: requires k > 4");
  if (m < 2) throw std::invalid_argument("case2: requires m >= 2");
  if (ell < 1 || scale < 1 || p <= 0.0 || p > 1.0 || p_prime <= 0.0 || p_prime > 1.0)
    throw std::invalid_argument("case2: bad parameters");

  Case2Scenario cs;
  cs.k = k;
  cs.m = m;
  cs.q = k / 4;
  cs.u_size = scale * static_cast<std::uint32_t>(std::ceil(1.0 / p_prime));
  cs.s_size = scale * static_cast<std::uint32_t>(std::ceil(1.0 / p));

  const NodeId n = k * cs.u_size + (m - 1) * cs.s_size;
  std::vector<Scenario::Edge> edges;

  auto add_clique = [&edges](NodeId base, NodeId size) {
    for (NodeId a = 0; a < size; ++a)
      for (NodeId b = a + 1; b < size; ++b) edges.push_back({base + a, base + b});
  };
  auto add_bipartite = [&edges](NodeId base_a, NodeId size_a, NodeId base_b, NodeId size_b) {
    for (NodeId a = 0; a < size_a; ++a)
      for (NodeId b = 0; b < size_b; ++b) edges.push_back({base_a + a, base_b + b});
  };

  for (std::uint32_t j = 1; j <= k; ++j) add_clique(cs.u_node(j, 0), cs.u_size);
  for (std::uint32_t h = 1; h <= m - 1; ++h) add_clique(cs.s_node(h, 0), cs.s_size);

  for (std::uint32_t j = 2; j <= k; ++j) {
    const std::uint32_t lo = (j > cs.q + 1) ? j - cs.q : 1;
    for (std::uint32_t i = lo; i <= j - 1; ++i)
      add_bipartite(cs.u_node(j, 0), cs.u_size, cs.u_node(i, 0), cs.u_size);
  }
  // index range clamped to the S cliques that exist
  for (std::uint32_t j = 1; j <= k; ++j) {
    if (j >= m) continue;
    const std::uint32_t lo = (m > j) ? std::max(1u, m - j) : 1u;
    for (std::uint32_t h = lo; h <= m - 1; ++h)
      add_bipartite(cs.u_node(j, 0), cs.u_size, cs.s_node(h, 0), cs.s_size);
  }

  std::vector<Round> wakes(n, 0);
  for (std::uint32_t h = 1; h <= m - 1; ++h)
    for (NodeId a = 0; a < cs.s_size; ++a) wakes[cs.s_node(h, a)] = h;
  for (std::uint32_t j = 1; j <= k; ++j)
    for (NodeId a = 0; a < cs.u_size; ++a) wakes[cs.u_node(j, a)] = ell + j;

  cs.behaviors.assign(n, UniformBehavior{});
  for (std::uint32_t j = 1; j <= k; ++j)
    for (NodeId a = 0; a < cs.u_size; ++a)
      cs.behaviors[cs.u_node(j, a)] =
          UniformBehavior{UniformBehavior::Mode::beep_after, m, p_prime};
  for (std::uint32_t h = 1; h <= m - 1; ++h)
    for (NodeId a = 0; a < cs.s_size; ++a)
      cs.behaviors[cs.s_node(h, a)] =
          UniformBehavior{UniformBehavior::Mode::beep_after, ell, p};

  cs.scenario = Scenario::make(n, std::move(edges), std::move(wakes));
  return cs;
}

}  // namespace beep
