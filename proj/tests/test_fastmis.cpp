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

#include <bit>

#include "beep/fastmis.hpp"
#include "beep/kernel.hpp"
#include "beep/scenarios.hpp"
#include "beep/verify.hpp"
#include "doctest.h"

using namespace beep;

namespace {

// Steps a node through `rounds` rounds of silence.
void advance_silent(FastMis& node, Rng& rng, Round rounds) {
  for (Round i = 0; i < rounds; ++i) {
    node.act(i, rng);
    node.deliver(Observation::silence);
  }
}

}  // namespace

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS(FastMis(FastMisConfig{3, 18}), std::invalid_argument);
  CHECK_THROWS_AS(FastMis(FastMisConfig{1, 18}), std::invalid_argument);
  CHECK_THROWS_AS(FastMis(FastMisConfig{0, 18}), std::invalid_argument);
  CHECK_THROWS_AS(FastMis(FastMisConfig{16, 0}), std::invalid_argument);
  CHECK_NOTHROW(FastMis(FastMisConfig{16, 1}));
  CHECK(FastMisConfig::round_up_pow2(1) == 2);
  CHECK(FastMisConfig::round_up_pow2(16) == 16);
  CHECK(FastMisConfig::round_up_pow2(17) == 32);
  CHECK(FastMisConfig::round_up_pow2(1000) == 1024);
}

TEST_CASE("a fresh node listens unconditionally through the quiet period") {
  FastMis node(FastMisConfig{16, 18});
  Rng rng(1, 0);
  CHECK(node.inactive_rounds() == 288);
  for (Round r = 1; r <= 288; ++r) {
    CHECK(node.state() == NodeState::inactive);
    CHECK(node.beep_probability() == 0.0);
    auto info = node.act(r - 1, rng);
    CHECK(info.action == Action::listen);
    CHECK(info.beep_prob == 0.0f);
    node.deliver(Observation::silence);
  }
  CHECK(node.state() == NodeState::competing);
}

TEST_CASE("phase beep probabilities follow the doubling schedule") {
  FastMis node(FastMisConfig{16, 18});
  Rng rng(1, 0);
  advance_silent(node, rng, 288);
  // four phases of 72 rounds at N = 16
  const double expect[] = {2.0 / 128, 4.0 / 128, 8.0 / 128, 16.0 / 128};
  for (int phase = 1; phase <= 4; ++phase) {
    CHECK(node.phase() == static_cast<std::uint32_t>(phase));
    CHECK(node.beep_probability() == doctest::Approx(expect[phase - 1]));
    advance_silent(node, rng, 72);
  }
  CHECK(node.state() == NodeState::mis);
  CHECK(node.beep_probability() == 0.5);
  // the potential accounting stays at the final phase figure
  CHECK(node.declared_probability() == 0.125);

  // the spot checks: phase 2 at N = 16 is 1/32, phase 4 is 1/8
  CHECK(expect[1] == 1.0 / 32);
  CHECK(expect[3] == 1.0 / 8);
}

TEST_CASE("hearing a beep restarts the full schedule from any stage") {
  Rng rng(3, 0);
  SUBCASE("while inactive") {
    FastMis node(FastMisConfig{16, 18});
    advance_silent(node, rng, 100);
    node.act(100, rng);
    node.deliver(Observation::heard_beep);
    CHECK(node.state() == NodeState::inactive);
    advance_silent(node, rng, 287);
    CHECK(node.state() == NodeState::inactive);  // full period starts over
    advance_silent(node, rng, 1);
    CHECK(node.state() == NodeState::competing);
  }
  SUBCASE("while competing") {
    FastMis node(FastMisConfig{16, 18});
    advance_silent(node, rng, 288 + 100);
    CHECK(node.state() == NodeState::competing);
    node.act(388, rng);
    node.deliver(Observation::heard_beep);
    CHECK(node.state() == NodeState::inactive);
  }
  SUBCASE("while in the MIS loop") {
    FastMis node(FastMisConfig{16, 18});
    advance_silent(node, rng, 576);
    CHECK(node.state() == NodeState::mis);
    node.act(576, rng);
    node.deliver(Observation::heard_beep);
    CHECK(node.state() == NodeState::inactive);
  }
}

TEST_CASE("MIS loop emits complementary two-round patterns") {
  FastMis node(FastMisConfig{16, 18});
  Rng rng(11, 0);
  advance_silent(node, rng, 576);
  int beeps = 0;
  const int blocks = 4000;
  for (int b = 0; b < blocks; ++b) {
    auto first = node.act(0, rng);
    node.deliver(Observation::none);
    auto second = node.act(1, rng);
    node.deliver(Observation::none);
    CHECK(first.action != second.action);  // exactly one beep per block
    CHECK(first.beep_prob == 0.125f);
    beeps += first.action == Action::beep;
  }
  // fair coin across blocks
  CHECK(beeps > blocks / 2 - 150);
  CHECK(beeps < blocks / 2 + 150);
}

TEST_CASE("two adjacent MIS-loop nodes: pairing forces mutual restarts") {
  // Walk both nodes into the MIS loop deterministically, then play blocks
  // over the two-node channel: opposite coin patterns make each hear the
  // other and both restart; equal patterns keep both alive.
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    FastMis u(FastMisConfig{16, 18}), v(FastMisConfig{16, 18});
    Rng ru(seed, 0), rv(seed, 1);
    advance_silent(u, ru, 576);
    advance_silent(v, rv, 576);
    REQUIRE(u.state() == NodeState::mis);
    REQUIRE(v.state() == NodeState::mis);

    auto ua = u.act(0, ru);
    auto va = v.act(0, rv);
    const bool same = ua.action == va.action;
    u.deliver(ua.action == Action::listen && va.action == Action::beep
                  ? Observation::heard_beep
                  : (ua.action == Action::listen ? Observation::silence : Observation::none));
    v.deliver(va.action == Action::listen && ua.action == Action::beep
                  ? Observation::heard_beep
                  : (va.action == Action::listen ? Observation::silence : Observation::none));
    if (same) {
      // block continues; second slots are complements, again equal actions
      CHECK(u.state() == NodeState::mis);
      CHECK(v.state() == NodeState::mis);
    } else {
      // the slot-0 beeper is heard by the slot-0 listener immediately
      CHECK((u.state() == NodeState::inactive || v.state() == NodeState::inactive));
    }
  }
}

TEST_CASE("both-survive probability of a paired block is one half per block") {
  // 2-clique through the kernel: survival of both for k blocks ~ 2^-k.
  const int trials = 4000;
  const int k = 3;
  int survived = 0;
  auto sc = std::make_shared<const Scenario>(Scenario::make_synchronous(2, {{0, 1}}));
  for (int trial = 0; trial < trials; ++trial) {
    // drive both nodes into the MIS loop with private channels silent: use
    // protocol objects directly, the channel below
    FastMis u(FastMisConfig{16, 18}), v(FastMisConfig{16, 18});
    Rng ru(trial, 0), rv(trial, 1);
    advance_silent(u, ru, 576);
    advance_silent(v, rv, 576);
    bool both = true;
    for (int b = 0; b < 2 * k && both; ++b) {
      auto ua = u.act(b, ru);
      auto va = v.act(b, rv);
      u.deliver(ua.action == Action::listen
                    ? (va.action == Action::beep ? Observation::heard_beep
                                                 : Observation::silence)
                    : Observation::none);
      v.deliver(va.action == Action::listen
                    ? (ua.action == Action::beep ? Observation::heard_beep
                                                 : Observation::silence)
                    : Observation::none);
      both = u.state() == NodeState::mis && v.state() == NodeState::mis;
    }
    survived += both;
  }
  const double freq = static_cast<double>(survived) / trials;
  const double expect = 1.0 / (1 << k);  // exact enumeration: 2 surviving
                                         // outcomes of 4 per block
  CHECK(freq == doctest::Approx(expect).epsilon(0.35));
}

TEST_CASE("a covered node marches into the MIS after its dominator crashes") {
  auto sc = std::make_shared<const Scenario>(
      Scenario::make(2, {{0, 1}}, {0, 0}, {{0, 700}}));
  auto factory = [](NodeId, Round) {
    return std::make_unique<FastMis>(FastMisConfig{16, 18});
  };
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto out = run_until_stable(sc, factory, seed, 4000);
    REQUIRE_FALSE(out.timed_out);
    const Round last = out.trace.round_count() - 1;
    CHECK(out.trace.rounds[last][1].state == NodeState::mis);
  }
}

TEST_CASE("stability only grows once wake-ups and crashes are over") {
  GenParams gp;
  gp.p = 0.5;
  auto factory = [](NodeId, Round) {
    return std::make_unique<FastMis>(FastMisConfig{16, 18});
  };
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    gp.seed = seed;
    WakePolicy wp;
    wp.kind = WakePolicy::Kind::staggered;
    wp.spacing = 1;
    auto sc = std::make_shared<const Scenario>(
        gen_standard(GraphFamily::gnp, 12, gp, wp));
    auto out = run_until_stable(sc, factory, seed, 40000);
    REQUIRE_FALSE(out.timed_out);
    auto sets = stable_sets(out.trace);
    for (Round t = sc->last_wake() + 1; t < out.trace.round_count(); ++t)
      for (NodeId u = 0; u < 12; ++u)
        if (sets[t - 1][u]) CHECK(sets[t][u]);
  }
}

TEST_CASE("lone node joins the MIS loop exactly after twice the quiet period") {
  auto sc = std::make_shared<const Scenario>(Scenario::make(1, {}, {5}));
  auto factory = [](NodeId, Round) {
    return std::make_unique<FastMis>(FastMisConfig{16, 18});
  };
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto tr = run(sc, factory, seed, 600);
    Round first = 0;
    for (Round t = 0; t < tr.round_count(); ++t)
      if (tr.rounds[t][0].state == NodeState::mis) {
        first = t;
        break;
      }
    CHECK(first - 5 == 576);  // relative to its wake round
  }

  // the bound holds for any configuration: twice c times the squared log
  auto lone = std::make_shared<const Scenario>(Scenario::make_synchronous(1, {}));
  for (auto [N, c] : {std::pair{4u, 3u}, std::pair{8u, 5u}, std::pair{32u, 2u}}) {
    const Round want = 2ull * c * std::bit_width(N - 1) * std::bit_width(N - 1);
    auto f = [N = N, c = c](NodeId, Round) {
      return std::make_unique<FastMis>(FastMisConfig{N, c});
    };
    auto tr = run(lone, f, 9, want + 8);
    for (Round t = 0; t < want; ++t) CHECK(tr.rounds[t][0].state != NodeState::mis);
    CHECK(tr.rounds[want][0].state == NodeState::mis);
  }
}
