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

#include "beep/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace beep {

using nlohmann::json;

namespace {

std::uint32_t ceil_log2(std::uint64_t x) {
  if (x <= 1) return 0;
  return static_cast<std::uint32_t>(std::bit_width(x - 1));
}

const std::map<std::string, GraphFamily> kFamilies = {
    {"complete", GraphFamily::complete}, {"path", GraphFamily::path},
    {"ring", GraphFamily::ring},         {"grid", GraphFamily::grid},
    {"gnp", GraphFamily::gnp}};

std::string family_name(GraphFamily f) {
  for (const auto& [name, v] : kFamilies)
    if (v == f) return name;
  return "?";
}

json wake_to_json(const WakePolicy& w) {
  json j;
  switch (w.kind) {
    case WakePolicy::Kind::synchronous: j["kind"] = "synchronous"; break;
    case WakePolicy::Kind::staggered:
      j["kind"] = "staggered";
      j["spacing"] = w.spacing;
      break;
    case WakePolicy::Kind::random:
      j["kind"] = "random";
      j["window"] = w.window;
      break;
    case WakePolicy::Kind::simple_wakeup:
      j["kind"] = "simple-wakeup";
      j["delta"] = w.delta;
      break;
  }
  return j;
}

WakePolicy wake_from_json(const json& j) {
  WakePolicy w;
  const std::string kind = j.value("kind", "synchronous");
  if (kind == "synchronous") w.kind = WakePolicy::Kind::synchronous;
  else if (kind == "staggered") {
    w.kind = WakePolicy::Kind::staggered;
    w.spacing = j.value("spacing", Round{1});
  } else if (kind == "random") {
    w.kind = WakePolicy::Kind::random;
    w.window = j.value("window", Round{1});
  } else if (kind == "simple-wakeup") {
    w.kind = WakePolicy::Kind::simple_wakeup;
    w.delta = j.value("delta", Round{8});
  } else {
    throw std::invalid_argument("unknown wake policy " + kind);
  }
  return w;
}

}  // namespace

std::pair<Scenario, std::vector<UniformBehavior>> ScenarioSpec::build() const {
  switch (kind) {
    case Kind::file:
      return {Scenario::load_file(path), {}};
    case Kind::standard:
      return {gen_standard(family, n, params, wake), {}};
    case Kind::grown:
      return {gen_grown(n, seed_size, max_attach, delta, params.seed), {}};
    case Kind::case1: {
      auto cs = gen_case1(k, ell, p, scale);
      return {std::move(cs.scenario), std::move(cs.behaviors)};
    }
    case Kind::case2: {
      auto cs = gen_case2(k, m, ell, p, p_prime, scale);
      return {std::move(cs.scenario), std::move(cs.behaviors)};
    }
  }
  throw std::logic_error("unreachable");
}

std::string ScenarioSpec::to_json_string() const {
  json j;
  switch (kind) {
    case Kind::file:
      j["kind"] = "file";
      j["path"] = path;
      break;
    case Kind::standard:
      j["kind"] = "standard";
      j["family"] = family_name(family);
      j["n"] = n;
      j["p"] = params.p;
      j["gen_seed"] = params.seed;
      j["wake"] = wake_to_json(wake);
      break;
    case Kind::grown:
      j["kind"] = "grown";
      j["n"] = n;
      j["seed_size"] = seed_size;
      j["max_attach"] = max_attach;
      j["delta"] = delta;
      j["gen_seed"] = params.seed;
      break;
    case Kind::case1:
      j["kind"] = "case1";
      j["k"] = k;
      j["ell"] = ell;
      j["p"] = p;
      j["scale"] = scale;
      break;
    case Kind::case2:
      j["kind"] = "case2";
      j["k"] = k;
      j["m"] = m;
      j["ell"] = ell;
      j["p"] = p;
      j["p_prime"] = p_prime;
      j["scale"] = scale;
      break;
  }
  return j.dump();
}

ScenarioSpec ScenarioSpec::from_json_string(const std::string& text) {
  const json j = json::parse(text);
  ScenarioSpec s;
  const std::string kind = j.value("kind", "standard");
  if (kind == "file") {
    s.kind = Kind::file;
    s.path = j.at("path").get<std::string>();
  } else if (kind == "standard") {
    s.kind = Kind::standard;
    s.family = kFamilies.at(j.value("family", std::string("gnp")));
    s.n = j.value("n", NodeId{16});
    s.params.p = j.value("p", 0.5);
    s.params.seed = j.value("gen_seed", std::uint64_t{1});
    if (j.contains("wake")) s.wake = wake_from_json(j["wake"]);
  } else if (kind == "grown") {
    s.kind = Kind::grown;
    s.n = j.value("n", NodeId{16});
    s.seed_size = j.value("seed_size", NodeId{4});
    s.max_attach = j.value("max_attach", NodeId{3});
    s.delta = j.value("delta", Round{0});
    s.params.seed = j.value("gen_seed", std::uint64_t{1});
  } else if (kind == "case1") {
    s.kind = Kind::case1;
    s.k = j.value("k", 8u);
    s.ell = j.value("ell", 1u);
    s.p = j.value("p", 0.5);
    s.scale = j.value("scale", 6u);
  } else if (kind == "case2") {
    s.kind = Kind::case2;
    s.k = j.value("k", 8u);
    s.m = j.value("m", 3u);
    s.ell = j.value("ell", 1u);
    s.p = j.value("p", 0.5);
    s.p_prime = j.value("p_prime", 0.5);
    s.scale = j.value("scale", 6u);
  } else {
    throw std::invalid_argument("unknown scenario kind " + kind);
  }
  return s;
}

std::string ProtocolSpec::to_json_string() const {
  json j;
  switch (kind) {
    case ProtocolKind::fastmis:
      j["kind"] = "fastmis";
      j["N"] = fastmis.size_bound;
      j["c"] = fastmis.c;
      break;
    case ProtocolKind::luby:
      j["kind"] = "luby";
      j["initial_k"] = luby.initial_k;
      j["restart"] =
          luby.semantics == RestartSemantics::literal ? "literal" : "proof-consistent";
      break;
    case ProtocolKind::w1:
      j["kind"] = "w1";
      if (w1.degree_bound) j["degree_bound"] = *w1.degree_bound;
      break;
    case ProtocolKind::w2:
      j["kind"] = "w2";
      break;
    case ProtocolKind::uniform:
      j["kind"] = "uniform";
      break;
  }
  return j.dump();
}

ProtocolSpec ProtocolSpec::from_json_string(const std::string& text) {
  const json j = json::parse(text);
  ProtocolSpec s;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "fastmis") {
    s.kind = ProtocolKind::fastmis;
    s.fastmis.size_bound = j.value("N", 16u);
    s.fastmis.c = j.value("c", 18u);
  } else if (kind == "luby") {
    s.kind = ProtocolKind::luby;
    s.luby.initial_k = j.value("initial_k", std::uint64_t{6});
    s.luby.semantics = j.value("restart", std::string("proof-consistent")) == "literal"
                           ? RestartSemantics::literal
                           : RestartSemantics::proof_consistent;
  } else if (kind == "w1") {
    s.kind = ProtocolKind::w1;
    if (j.contains("degree_bound")) s.w1.degree_bound = j["degree_bound"].get<std::uint64_t>();
  } else if (kind == "w2") {
    s.kind = ProtocolKind::w2;
  } else if (kind == "uniform") {
    s.kind = ProtocolKind::uniform;
  } else {
    throw std::invalid_argument("unknown protocol kind " + kind);
  }
  return s;
}

ProtocolFactory make_factory(const ProtocolSpec& spec) {
  switch (spec.kind) {
    case ProtocolKind::fastmis: {
      FastMisConfig cfg = spec.fastmis;
      return [cfg](NodeId, Round) { return std::make_unique<FastMis>(cfg); };
    }
    case ProtocolKind::luby: {
      LubyConfig cfg = spec.luby;
      return [cfg](NodeId, Round wake) { return std::make_unique<LubyProtocol>(cfg, wake); };
    }
    case ProtocolKind::w1: {
      W1Config cfg = spec.w1;
      return [cfg](NodeId, Round wake) { return std::make_unique<W1Protocol>(cfg, wake); };
    }
    case ProtocolKind::w2:
      return [](NodeId, Round wake) { return std::make_unique<W2Protocol>(wake); };
    case ProtocolKind::uniform: {
      auto behaviors = spec.behaviors;
      return [behaviors](NodeId u, Round wake) {
        const UniformBehavior b =
            u < behaviors.size() ? behaviors[u] : UniformBehavior{};
        return std::make_unique<UniformBehaviorProtocol>(b, wake);
      };
    }
  }
  throw std::logic_error("unreachable");
}

Round default_round_cap(const ProtocolSpec& spec, NodeId n) {
  const Round logn = std::max<Round>(1, ceil_log2(std::max<NodeId>(2, n)));
  if (spec.kind == ProtocolKind::fastmis) {
    const Round logN = std::max<Round>(1, ceil_log2(spec.fastmis.size_bound));
    return 20 * spec.fastmis.c * logN * logN * logn;
  }
  if (spec.kind == ProtocolKind::uniform) return 4 * (n + 4);
  return 500 * logn * logn;
}

std::vector<std::uint64_t> ExperimentConfig::seed_list() const {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> out(seed_count);
  for (std::uint32_t i = 0; i < seed_count; ++i) out[i] = seed_base + i;
  return out;
}

Round ExperimentConfig::effective_cap(NodeId n) const {
  return round_cap > 0 ? round_cap : default_round_cap(protocol, n);
}

namespace {

void validate_preconditions(const ExperimentConfig& cfg, const Scenario& scenario,
                            Round cap) {
  const NodeId n = scenario.node_count();
  switch (cfg.protocol.kind) {
    case ProtocolKind::fastmis:
      if (cfg.protocol.fastmis.size_bound < n)
        throw std::invalid_argument("fastmis: size bound below the node count");
      break;
    case ProtocolKind::w1: {
      const auto delta = simple_wakeup_delta(scenario);
      if (cfg.protocol.w1.degree_bound) {
        if (scenario.max_degree() > *cfg.protocol.w1.degree_bound)
          throw std::invalid_argument("w1: degree bound below the actual maximum degree");
        if (delta && *delta < ceil_log2(scenario.max_degree() + 1))
          throw std::invalid_argument("w1: wake-up guarantee below log of the degree");
      } else if (delta && *delta < ceil_log2(cap)) {
        throw std::invalid_argument("w1: wake-up guarantee below log of the round cap");
      }
      if (!validate_simple_wakeup(scenario, delta.value_or(0)).empty())
        throw std::invalid_argument("w1: scenario violates the wake-up restriction");
      break;
    }
    case ProtocolKind::w2: {
      const auto delta = simple_wakeup_delta(scenario);
      if (delta && *delta < ceil_log2(std::max<NodeId>(2, scenario.max_degree())))
        throw std::invalid_argument("w2: wake-up guarantee below log of the max degree");
      if (!validate_simple_wakeup(scenario, delta.value_or(0)).empty())
        throw std::invalid_argument("w2: scenario violates the wake-up restriction");
      break;
    }
    default:
      break;
  }
}

TrialResult analyze_trial(const ExperimentConfig& cfg, const RunOutcome& out,
                          std::uint64_t seed, Round window) {
  TrialResult r;
  r.seed = seed;
  r.rounds_run = out.trace.round_count();
  r.stabilization = out.stabilization;
  r.timed_out = out.timed_out;
  r.digest = out.trace.digest();
  if (out.trace.round_count() == 0) return r;

  const Round eval = out.trace.round_count() - 1;
  const auto verdict = check_mis(out.trace, eval);
  r.independent = verdict.independent;
  r.maximal = verdict.maximal;
  const auto& row = out.trace.rounds[eval];
  for (NodeId u = 0; u < row.size(); ++u)
    if (row[u].state == NodeState::mis && out.trace.scenario->participating(u, eval))
      ++r.mis_size;

  const bool triple_proto =
      cfg.protocol.kind == ProtocolKind::luby || cfg.protocol.kind == ProtocolKind::w1 ||
      cfg.protocol.kind == ProtocolKind::w2;
  const bool fastmis = cfg.protocol.kind == ProtocolKind::fastmis;

  if (fastmis || triple_proto) r.adj = adjacent_mis_report(out.trace);

  if (fastmis && cfg.audit_slow_change.value_or(true)) {
    r.slow_change_violations =
        audit_slow_change(out.trace, cfg.lambdas, window).size();
    r.competing_potential = competing_potential_stat(out.trace);
  }

  if (triple_proto) {
    const bool blocks = cfg.protocol.kind == ProtocolKind::w2;
    std::vector<std::uint64_t> last_k(out.trace.scenario->node_count(), 0);
    for (Round t = 0; t < out.trace.round_count(); ++t) {
      const auto& rr = out.trace.rounds[t];
      for (NodeId u = 0; u < rr.size(); ++u) {
        const std::uint64_t k = rr[u].k;
        if (k == 0) continue;
        r.max_k = std::max(r.max_k, k);
        if (k < last_k[u]) r.k_monotone_ok = false;
        last_k[u] = k;
        if (blocks) {
          if (!std::has_single_bit(k)) r.k_form_ok = false;
          const int lv = rr[u].levels;
          const std::uint64_t cap =
              lv < 0 ? 1 : (lv >= 62 ? ~0ull : (1ull << (lv + 1)));
          if (k > cap) ++r.k_cap_violations;
        } else {
          if (k % 6 != 0 || !std::has_single_bit(k / 6)) r.k_form_ok = false;
        }
      }
    }
  }
  return r;
}

}  // namespace

Report run_batch(const ExperimentConfig& config) {
  auto [scenario_v, behaviors] = config.scenario.build();
  auto scenario = std::make_shared<const Scenario>(std::move(scenario_v));
  const Round cap = config.effective_cap(scenario->node_count());
  validate_preconditions(config, *scenario, cap);

  ProtocolSpec pspec = config.protocol;
  if (pspec.kind == ProtocolKind::uniform && pspec.behaviors.empty())
    pspec.behaviors = behaviors;
  const ProtocolFactory factory = make_factory(pspec);

  const Round window =
      static_cast<Round>(config.protocol.fastmis.c) *
      std::max<Round>(1, ceil_log2(config.protocol.fastmis.size_bound));

  const auto seeds = config.seed_list();
  Report report;
  report.config = config;
  report.config.protocol = pspec;
  report.trials.resize(seeds.size());

  unsigned threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, seeds.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= seeds.size()) return;
      const auto out = run_until_stable(scenario, factory, seeds[i], cap);
      report.trials[i] = analyze_trial(config, out, seeds[i], window);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return report;
}

RunOutcome replay(const ExperimentConfig& config, std::uint64_t seed) {
  auto [scenario_v, behaviors] = config.scenario.build();
  auto scenario = std::make_shared<const Scenario>(std::move(scenario_v));
  ProtocolSpec pspec = config.protocol;
  if (pspec.kind == ProtocolKind::uniform && pspec.behaviors.empty())
    pspec.behaviors = behaviors;
  return run_until_stable(scenario, make_factory(pspec), seed,
                          config.effective_cap(scenario->node_count()));
}

std::uint64_t Report::timeouts() const {
  std::uint64_t n = 0;
  for (const auto& t : trials) n += t.timed_out;
  return n;
}

double Report::timeout_rate() const {
  return trials.empty() ? 0.0 : static_cast<double>(timeouts()) / trials.size();
}

std::optional<double> Report::stabilization_quantile(double q) const {
  std::vector<double> xs;
  for (const auto& t : trials)
    if (t.stabilization) xs.push_back(static_cast<double>(*t.stabilization));
  if (xs.empty()) return std::nullopt;
  std::sort(xs.begin(), xs.end());
  const double idx = q * (xs.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(idx);
  const std::size_t hi = std::min(xs.size() - 1, lo + 1);
  const double frac = idx - lo;
  return xs[lo] * (1 - frac) + xs[hi] * frac;
}

std::map<std::uint64_t, std::uint64_t> Report::max_k_histogram() const {
  std::map<std::uint64_t, std::uint64_t> h;
  for (const auto& t : trials)
    if (t.max_k) ++h[t.max_k];
  return h;
}

std::string Report::to_json_string() const {
  json j;
  j["scenario"] = json::parse(config.scenario.to_json_string());
  j["protocol"] = json::parse(config.protocol.to_json_string());
  j["round_cap"] = config.round_cap;
  json trials_j = json::array();
  for (const auto& t : trials) {
    json tj;
    tj["seed"] = t.seed;
    tj["rounds"] = t.rounds_run;
    if (t.stabilization) tj["stabilization"] = *t.stabilization;
    tj["timeout"] = t.timed_out;
    tj["independent"] = t.independent;
    tj["maximal"] = t.maximal;
    tj["mis_size"] = t.mis_size;
    tj["adjacent_mis_episodes"] = t.adj.episodes;
    tj["slow_change_violations"] = t.slow_change_violations;
    if (t.max_k) tj["max_k"] = t.max_k;
    tj["digest"] = t.digest;
    trials_j.push_back(std::move(tj));
  }
  j["trials"] = std::move(trials_j);
  json agg;
  agg["trials"] = trials.size();
  agg["timeouts"] = timeouts();
  agg["timeout_rate"] = timeout_rate();
  if (auto med = stabilization_quantile(0.5)) agg["stabilization_median"] = *med;
  if (auto p90 = stabilization_quantile(0.9)) agg["stabilization_p90"] = *p90;
  json hist = json::object();
  for (const auto& [k, c] : max_k_histogram()) hist[std::to_string(k)] = c;
  agg["max_k_histogram"] = std::move(hist);
  j["aggregate"] = std::move(agg);
  return j.dump(2);
}

void Report::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << to_json_string() << '\n';
}

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3)
    throw std::invalid_argument("fit: need at least three points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].second <= 0 || points[i].first < 2)
      throw std::invalid_argument("fit: points must have n >= 2 and T > 0");
    if (i > 0 && points[i].first <= points[i - 1].first)
      throw std::invalid_argument("fit: n must be strictly increasing");
  }
  std::vector<double> xs, ys;
  for (const auto& [n, T] : points) {
    xs.push_back(std::log(std::log2(n)));
    ys.push_back(std::log(T));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0) throw std::invalid_argument("fit: degenerate abscissae");
  ScalingFit fit;
  fit.exponent = sxy / sxx;
  fit.amplitude = std::exp(my - fit.exponent * mx);
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (std::log(fit.amplitude) + fit.exponent * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / xs.size());
  return fit;
}

}  // namespace beep
