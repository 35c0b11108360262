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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "beep/fastmis.hpp"
#include "beep/kernel.hpp"
#include "beep/luby.hpp"
#include "beep/scenarios.hpp"
#include "beep/verify.hpp"
#include "beep/wakeup.hpp"

namespace beep {

struct ScenarioSpec {
  enum class Kind { file, standard, grown, case1, case2 } kind = Kind::standard;

  std::string path;  // kind == file

  GraphFamily family = GraphFamily::gnp;  // kind == standard
  NodeId n = 16;
  GenParams params;
  WakePolicy wake;

  NodeId seed_size = 4;  // kind == grown
  NodeId max_attach = 3;
  Round delta = 0;  // 0: derive from the built graph's degree

  std::uint32_t k = 8, ell = 1, m = 3;  // kind == case1 / case2
  double p = 0.5, p_prime = 0.5;
  std::uint32_t scale = 6;

  // Builds the scenario; for the adversarial cases also the per-node
  // behaviors (empty otherwise).
  std::pair<Scenario, std::vector<UniformBehavior>> build() const;

  std::string to_json_string() const;
  static ScenarioSpec from_json_string(const std::string&);
};

enum class ProtocolKind { fastmis, luby, w1, w2, uniform };

struct ProtocolSpec {
  ProtocolKind kind = ProtocolKind::fastmis;
  FastMisConfig fastmis;
  LubyConfig luby;
  W1Config w1;
  std::vector<UniformBehavior> behaviors;  // uniform; filled from case specs

  std::string to_json_string() const;
  static ProtocolSpec from_json_string(const std::string&);
};

struct ExperimentConfig {
  ScenarioSpec scenario;
  ProtocolSpec protocol;
  std::uint64_t seed_base = 1;
  std::uint32_t seed_count = 1;
  std::vector<std::uint64_t> seeds;  // when non-empty, overrides base/count
  Round round_cap = 0;               // 0: protocol-specific default
  unsigned threads = 0;              // 0: hardware concurrency

  // analysis toggles (defaulted per protocol kind when unset)
  std::optional<bool> audit_slow_change;
  std::vector<double> lambdas{0.25, 0.5, 1.0, 2.0};

  std::vector<std::uint64_t> seed_list() const;
  Round effective_cap(NodeId n) const;
};

struct TrialResult {
  std::uint64_t seed = 0;
  Round rounds_run = 0;
  std::optional<Round> stabilization;
  bool timed_out = false;
  bool independent = true;
  bool maximal = true;
  std::uint64_t mis_size = 0;
  AdjacentMisReport adj;
  std::uint64_t slow_change_violations = 0;
  double competing_potential = 0.0;
  std::uint64_t max_k = 0;
  bool k_form_ok = true;      // every recorded k is 6 * 2^j (triple protocols)
  bool k_monotone_ok = true;
  std::uint64_t k_cap_violations = 0;  // k beyond decoded levels
  std::uint64_t digest = 0;
};

struct Report {
  ExperimentConfig config;
  std::vector<TrialResult> trials;

  std::uint64_t timeouts() const;
  double timeout_rate() const;
  std::optional<double> stabilization_quantile(double q) const;
  std::map<std::uint64_t, std::uint64_t> max_k_histogram() const;

  std::string to_json_string() const;
  void save_file(const std::string& path) const;
};

// Runs one trial per seed (in parallel), evaluating the per-trial checks.
// Throws std::invalid_argument if the scenario fails the protocol's
// precondition (wake-up guarantee, size bound, degree bound).
Report run_batch(const ExperimentConfig& config);

// Re-runs a single seed of a config with full trace recording.
RunOutcome replay(const ExperimentConfig& config, std::uint64_t seed);

ProtocolFactory make_factory(const ProtocolSpec& spec);

// Default round caps: 20*c*log2(N)^2*log2(n) for the size-bound protocol,
// 500*log2(n)^2 for the synchronized and wake-up ones.
Round default_round_cap(const ProtocolSpec& spec, NodeId n);

struct ScalingFit {
  double exponent = 0.0;
  double amplitude = 0.0;
  double residual = 0.0;
};

// Least-squares fit of T ~ a * (log2 n)^b over (n, T) points; returns b as
// `exponent`. Requires >= 3 points with strictly increasing n and T > 0.
ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points);

}  // namespace beep
