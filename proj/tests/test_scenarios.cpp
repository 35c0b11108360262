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

#include <algorithm>
#include <set>

#include "beep/kernel.hpp"
#include "beep/scenarios.hpp"
#include "doctest.h"

using namespace beep;

namespace {

bool adjacent(const Scenario& s, NodeId a, NodeId b) {
  auto nb = s.neighbors(a);
  return std::find(nb.begin(), nb.end(), b) != nb.end();
}

}  // namespace

TEST_CASE("standard families") {
  GenParams gp;
  CHECK(gen_standard(GraphFamily::complete, 6, gp, {}).edge_count() == 15);
  CHECK(gen_standard(GraphFamily::path, 6, gp, {}).edge_count() == 5);
  CHECK(gen_standard(GraphFamily::ring, 6, gp, {}).edge_count() == 6);
  CHECK(gen_standard(GraphFamily::grid, 9, gp, {}).edge_count() == 12);
  CHECK_THROWS_AS(gen_standard(GraphFamily::grid, 10, gp, {}), std::invalid_argument);

  gp.p = 0.5;
  gp.seed = 4;
  auto a = gen_standard(GraphFamily::gnp, 64, gp, {});
  auto b = gen_standard(GraphFamily::gnp, 64, gp, {});
  CHECK(a.edge_count() == b.edge_count());  // generator pure given a seed
  CHECK(a.edge_count() > 700);
  CHECK(a.edge_count() < 1300);
}

TEST_CASE("wake policies") {
  GenParams gp;
  SUBCASE("synchronous") {
    auto s = gen_standard(GraphFamily::path, 5, gp, {});
    for (NodeId u = 0; u < 5; ++u) CHECK(s.wake_round(u) == 0);
  }
  SUBCASE("staggered spreads one node per spacing") {
    WakePolicy w;
    w.kind = WakePolicy::Kind::staggered;
    w.spacing = 1;
    auto s = gen_standard(GraphFamily::complete, 5, gp, w);
    for (NodeId u = 0; u < 5; ++u) CHECK(s.wake_round(u) == u);
    w.spacing = 3;
    auto s3 = gen_standard(GraphFamily::complete, 5, gp, w);
    for (NodeId u = 0; u < 5; ++u) CHECK(s3.wake_round(u) == 3 * u);
  }
  SUBCASE("random wakes stay within the window") {
    WakePolicy w;
    w.kind = WakePolicy::Kind::random;
    w.window = 16;
    auto s = gen_standard(GraphFamily::path, 32, gp, w);
    for (NodeId u = 0; u < 32; ++u) CHECK(s.wake_round(u) < 16);
  }
  SUBCASE("growth policy guarantees an old neighbor") {
    WakePolicy w;
    w.kind = WakePolicy::Kind::simple_wakeup;
    w.delta = 8;
    auto s = gen_standard(GraphFamily::path, 20, gp, w);
    CHECK(validate_simple_wakeup(s, 8).empty());
    auto d = simple_wakeup_delta(s);
    REQUIRE(d.has_value());
    CHECK(*d >= 8);
    // grown left to right: each late node's predecessor woke 8 earlier
    for (NodeId u = 1; u < 20; ++u)
      CHECK(s.wake_round(u) - s.wake_round(u - 1) >= 8);
  }
}

TEST_CASE("grown graphs derive the wake spacing from the degree") {
  auto s = gen_grown(64, 4, 3, 0, 11);
  CHECK(s.node_count() == 64);
  const auto d = simple_wakeup_delta(s);
  REQUIRE(d.has_value());
  const Round want = 2 * static_cast<Round>(std::bit_width(
                             std::uint64_t{std::max<NodeId>(2, s.max_degree()) - 1}));
  CHECK(*d == want);
  CHECK(validate_simple_wakeup(s, *d).empty());
  for (NodeId u = 0; u < 4; ++u) CHECK(s.wake_round(u) == 0);
}

TEST_CASE("wake-up validator flags missing old neighbors and risky crashes") {
  // node 2 wakes late with only a same-age neighbor
  auto s = Scenario::make(3, {{0, 1}, {1, 2}}, {0, 10, 10});
  auto v = validate_simple_wakeup(s, 5);
  REQUIRE(v.size() == 1);
  CHECK(v[0].node == 2);

  // crash while the neighbor is young
  auto s2 = Scenario::make(2, {{0, 1}}, {0, 6}, {{0, 8}});
  CHECK_FALSE(validate_simple_wakeup(s2, 6).empty());
  auto s3 = Scenario::make(2, {{0, 1}}, {0, 6}, {{0, 20}});
  CHECK(validate_simple_wakeup(s3, 6).empty());
}

TEST_CASE("uniform behaviors beep only in their scheduled round") {
  auto sc = std::make_shared<const Scenario>(Scenario::make(1, {}, {4}));
  SUBCASE("beep-after with certainty") {
    auto f = [](NodeId, Round w) {
      return std::make_unique<UniformBehaviorProtocol>(
          UniformBehavior{UniformBehavior::Mode::beep_after, 3, 1.0}, w);
    };
    auto tr = run(sc, f, 1, 12);
    for (Round t = 4; t < 12; ++t)
      CHECK(tr.rounds[t][0].action == (t == 6 ? Action::beep : Action::listen));
    CHECK(tr.rounds[6][0].beep_prob == 1.0f);
  }
  SUBCASE("silent forever") {
    auto f = [](NodeId, Round w) {
      return std::make_unique<UniformBehaviorProtocol>(UniformBehavior{}, w);
    };
    auto tr = run(sc, f, 1, 12);
    for (Round t = 4; t < 12; ++t) CHECK(tr.rounds[t][0].action == Action::listen);
  }
}

TEST_CASE("staggered-clique construction, full size") {
  auto cs = gen_case1(8, 1, 0.5, 6);
  const Scenario& s = cs.scenario;
  CHECK(cs.sub_size == 12);
  CHECK(s.node_count() == 7 * 96 + 8 * 6);  // 720

  // C_i is a 96-clique split into 8 sub-cliques of 12
  CHECK(adjacent(s, cs.c_node(1, 1, 0), cs.c_node(1, 8, 11)));
  CHECK_FALSE(adjacent(s, cs.c_node(1, 1, 0), cs.c_node(2, 1, 0)));
  // U_j is a 6-clique joined to C_i(j) for every i, and only to column j
  CHECK(adjacent(s, cs.u_node(3, 0), cs.u_node(3, 5)));
  for (std::uint32_t i = 1; i <= 7; ++i) {
    CHECK(adjacent(s, cs.u_node(3, 0), cs.c_node(i, 3, 0)));
    CHECK_FALSE(adjacent(s, cs.u_node(3, 0), cs.c_node(i, 4, 0)));
  }
  CHECK(s.degree(cs.u_node(1, 0)) == 5 + 7 * 12);
  CHECK(s.degree(cs.c_node(1, 1, 0)) == 95 + 6);

  // wake schedule: C_i at round i, all U at the behavior round
  CHECK(s.wake_round(cs.c_node(1, 1, 0)) == 1);
  CHECK(s.wake_round(cs.c_node(7, 8, 11)) == 7);
  for (std::uint32_t j = 1; j <= 8; ++j) CHECK(s.wake_round(cs.u_node(j, 0)) == 1);

  // behaviors: broadcasters on the C side, silent listeners on the U side
  CHECK(cs.behaviors[cs.c_node(2, 3, 4)].mode == UniformBehavior::Mode::beep_after);
  CHECK(cs.behaviors[cs.c_node(2, 3, 4)].ell == 1);
  CHECK(cs.behaviors[cs.u_node(2, 3)].mode == UniformBehavior::Mode::silent_forever);
}

TEST_CASE("staggered-clique construction, smallest instance") {
  auto cs = gen_case1(2, 1, 0.5, 3);
  const Scenario& s = cs.scenario;
  CHECK(s.node_count() == 1 * (2 * 3 * 2) + 2 * 3);  // one C of 12, two U of 3
  CHECK(adjacent(s, cs.u_node(1, 0), cs.c_node(1, 1, 0)));
  CHECK_FALSE(adjacent(s, cs.u_node(1, 0), cs.c_node(1, 2, 0)));
  CHECK(adjacent(s, cs.u_node(2, 0), cs.c_node(1, 2, 0)));
  CHECK_THROWS_AS(gen_case1(1, 1, 0.5, 3), std::invalid_argument);
  CHECK_THROWS_AS(gen_case1(2, 2, 0.5, 3), std::invalid_argument);
}

TEST_CASE("layered-clique construction wiring and clamps") {
  auto cs = gen_case2(8, 3, 1, 0.5, 0.5, 6);
  const Scenario& s = cs.scenario;
  CHECK(cs.q == 2);
  CHECK(cs.u_size == 12);
  CHECK(cs.s_size == 12);
  CHECK(s.node_count() == 8 * 12 + 2 * 12);

  // U_j reaches back exactly q earlier U cliques (U_1 contributes none)
  for (std::uint32_t j = 2; j <= 8; ++j) {
    const std::uint32_t lo = j > 3 ? j - 2 : 1;
    for (std::uint32_t i = 1; i < j; ++i)
      CHECK(adjacent(s, cs.u_node(j, 0), cs.u_node(i, 0)) == (i >= lo));
  }
  // S attachments exist only for j < m, clamped to existing cliques
  CHECK(adjacent(s, cs.u_node(1, 0), cs.s_node(2, 0)));
  CHECK_FALSE(adjacent(s, cs.u_node(1, 0), cs.s_node(1, 0)));
  CHECK(adjacent(s, cs.u_node(2, 0), cs.s_node(1, 0)));
  CHECK(adjacent(s, cs.u_node(2, 0), cs.s_node(2, 0)));
  for (std::uint32_t j = 3; j <= 8; ++j)
    for (std::uint32_t h = 1; h <= 2; ++h)
      CHECK_FALSE(adjacent(s, cs.u_node(j, 0), cs.s_node(h, 0)));

  // wake rounds: S_h at h, U_j at ell + j
  CHECK(s.wake_round(cs.s_node(1, 0)) == 1);
  CHECK(s.wake_round(cs.s_node(2, 0)) == 2);
  for (std::uint32_t j = 1; j <= 8; ++j) CHECK(s.wake_round(cs.u_node(j, 0)) == 1 + j);

  // behaviors
  CHECK(cs.behaviors[cs.s_node(1, 0)].ell == 1);
  CHECK(cs.behaviors[cs.u_node(1, 0)].ell == 3);
  CHECK(cs.behaviors[cs.u_node(1, 0)].mode == UniformBehavior::Mode::beep_after);

  CHECK_THROWS_AS(gen_case2(4, 3, 1, 0.5, 0.5, 6), std::invalid_argument);
  CHECK_THROWS_AS(gen_case2(8, 1, 1, 0.5, 0.5, 6), std::invalid_argument);
}

TEST_CASE("broadcasters in the staggered construction fire at their wake round") {
  auto cs = gen_case1(4, 1, 1.0, 2);  // certainty beeps for determinism
  auto sc = std::make_shared<const Scenario>(cs.scenario);
  auto behaviors = cs.behaviors;
  auto f = [&behaviors](NodeId u, Round w) {
    return std::make_unique<UniformBehaviorProtocol>(behaviors[u], w);
  };
  auto tr = run(sc, f, 1, 8);
  for (std::uint32_t i = 1; i <= 3; ++i) {
    const NodeId c = cs.c_node(i, 1, 0);
    for (Round t = 0; t < 8; ++t) {
      if (!sc->participating(c, t)) continue;
      CHECK(tr.rounds[t][c].action == (t == i ? Action::beep : Action::listen));
    }
  }
  // U nodes hear a beep in each of their first k-1 awake rounds
  for (std::uint32_t j = 1; j <= 4; ++j)
    for (Round t = 1; t <= 3; ++t)
      CHECK(tr.rounds[t][cs.u_node(j, 0)].observation == Observation::heard_beep);
}
