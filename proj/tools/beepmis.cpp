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

// Command line runner: seeded experiment batches, scaling sweeps, exact
// replay, scenario generation, trace verification, and codec debugging.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "beep/harness.hpp"
#include "beep/kernel.hpp"
#include "beep/scenarios.hpp"
#include "beep/time_codec.hpp"
#include "beep/verify.hpp"

using namespace beep;

namespace {

struct ScenarioCli {
  std::string file;
  std::string family = "gnp";
  NodeId n = 64;
  double p = 0.5;
  std::uint64_t gen_seed = 1;
  std::string wake = "sync";
  Round spacing = 1;
  Round window = 16;
  Round delta = 8;
  NodeId seed_size = 4;
  NodeId max_attach = 3;
  std::uint32_t k = 8, ell = 1, m = 3;
  double p2 = 0.5;
  std::uint32_t scale = 6;

  void attach(CLI::App* cmd) {
    cmd->add_option("--scenario", file, "scenario file (overrides the generator)");
    cmd->add_option("--gen", family,
                    "graph family: gnp|path|ring|grid|complete|grown|case1|case2");
    cmd->add_option("--n", n, "node count");
    cmd->add_option("--p", p, "edge probability (gnp) / broadcast probability (cases)");
    cmd->add_option("--gen-seed", gen_seed, "generator seed");
    cmd->add_option("--wake", wake, "wake policy: sync|staggered|random|simple");
    cmd->add_option("--spacing", spacing, "staggered wake spacing");
    cmd->add_option("--window", window, "random wake window");
    cmd->add_option("--delta", delta, "wake-up guarantee (simple policy / grown graphs)");
    cmd->add_option("--seed-size", seed_size, "grown graphs: initial clique size");
    cmd->add_option("--max-attach", max_attach, "grown graphs: attachments per node");
    cmd->add_option("--k", k, "construction parameter k");
    cmd->add_option("--ell", ell, "construction parameter ell");
    cmd->add_option("--m", m, "construction parameter m");
    cmd->add_option("--p2", p2, "construction parameter p'");
    cmd->add_option("--scale", scale, "construction scale factor");
  }

  ScenarioSpec spec() const {
    ScenarioSpec s;
    if (!file.empty()) {
      s.kind = ScenarioSpec::Kind::file;
      s.path = file;
      return s;
    }
    if (family == "grown") {
      s.kind = ScenarioSpec::Kind::grown;
      s.n = n;
      s.seed_size = seed_size;
      s.max_attach = max_attach;
      s.delta = delta;
      s.params.seed = gen_seed;
      return s;
    }
    if (family == "case1") {
      s.kind = ScenarioSpec::Kind::case1;
      s.k = k;
      s.ell = ell;
      s.p = p;
      s.scale = scale;
      return s;
    }
    if (family == "case2") {
      s.kind = ScenarioSpec::Kind::case2;
      s.k = k;
      s.m = m;
      s.ell = ell;
      s.p = p;
      s.p_prime = p2;
      s.scale = scale;
      return s;
    }
    s.kind = ScenarioSpec::Kind::standard;
    const std::map<std::string, GraphFamily> fams = {
        {"gnp", GraphFamily::gnp},         {"path", GraphFamily::path},
        {"ring", GraphFamily::ring},       {"grid", GraphFamily::grid},
        {"complete", GraphFamily::complete}};
    s.family = fams.at(family);
    s.n = n;
    s.params.p = p;
    s.params.seed = gen_seed;
    if (wake == "sync") {
      s.wake.kind = WakePolicy::Kind::synchronous;
    } else if (wake == "staggered") {
      s.wake.kind = WakePolicy::Kind::staggered;
      s.wake.spacing = spacing;
    } else if (wake == "random") {
      s.wake.kind = WakePolicy::Kind::random;
      s.wake.window = window;
    } else if (wake == "simple") {
      s.wake.kind = WakePolicy::Kind::simple_wakeup;
      s.wake.delta = delta;
    } else {
      throw CLI::ValidationError("--wake", "unknown wake policy " + wake);
    }
    return s;
  }
};

struct ProtocolCli {
  std::string name = "fastmis";
  std::uint32_t size_bound = 0;  // 0: round up from n
  std::uint32_t c = 18;
  std::uint64_t initial_k = 6;
  std::string restart = "proof-consistent";
  std::uint64_t degree_bound = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--protocol", name, "fastmis|luby|w1|w1-delta|w2|uniform");
    cmd->add_option("--N", size_bound, "size bound (fastmis; rounded up to a power of two)");
    cmd->add_option("--c", c, "schedule multiplier (fastmis)");
    cmd->add_option("--initial-k", initial_k, "initial parameter (luby)");
    cmd->add_option("--restart", restart, "restart slot rule: proof-consistent|literal");
    cmd->add_option("--degree-bound", degree_bound, "degree bound (w1-delta)");
  }

  ProtocolSpec spec(NodeId n) const {
    ProtocolSpec s;
    if (name == "fastmis") {
      s.kind = ProtocolKind::fastmis;
      s.fastmis.size_bound =
          FastMisConfig::round_up_pow2(size_bound ? size_bound : n);
      s.fastmis.c = c;
    } else if (name == "luby") {
      s.kind = ProtocolKind::luby;
      s.luby.initial_k = initial_k;
      s.luby.semantics = restart == "literal" ? RestartSemantics::literal
                                              : RestartSemantics::proof_consistent;
    } else if (name == "w1") {
      s.kind = ProtocolKind::w1;
    } else if (name == "w1-delta") {
      s.kind = ProtocolKind::w1;
      s.w1.degree_bound = degree_bound ? degree_bound : 64;
    } else if (name == "w2") {
      s.kind = ProtocolKind::w2;
    } else if (name == "uniform") {
      s.kind = ProtocolKind::uniform;
    } else {
      throw CLI::ValidationError("--protocol", "unknown protocol " + name);
    }
    return s;
  }
};

void print_summary(const Report& rep) {
  std::cout << rep.to_json_string() << "\n";
}

int exit_code(const Report& rep) {
  for (const auto& t : rep.trials) {
    if (!t.timed_out && (!t.independent || !t.maximal)) return 1;
    if (t.slow_change_violations || !t.k_form_ok || !t.k_monotone_ok ||
        t.k_cap_violations || t.adj.entry_violations)
      return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"beeping-model MIS simulator and verification harness"};
  app.require_subcommand(1);

  // ---- run
  auto* run_cmd = app.add_subcommand("run", "run a seeded trial batch");
  ScenarioCli run_sc;
  ProtocolCli run_pr;
  run_sc.attach(run_cmd);
  run_pr.attach(run_cmd);
  std::uint64_t seed_base = 1;
  std::uint32_t seeds = 1;
  Round cap = 0;
  std::string report_out, trace_out, scenario_out;
  run_cmd->add_option("--seed", seed_base, "first trial seed");
  run_cmd->add_option("--seeds", seeds, "number of trials");
  run_cmd->add_option("--cap", cap, "round cap (0: protocol default)");
  run_cmd->add_option("--report", report_out, "write the report here");
  run_cmd->add_option("--trace", trace_out, "write the first seed's trace (csv)");
  run_cmd->add_option("--scenario-out", scenario_out, "also save the built scenario");

  // ---- sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "median stabilization across sizes");
  ProtocolCli sweep_pr;
  sweep_pr.attach(sweep_cmd);
  std::vector<NodeId> sweep_sizes{64, 128, 256, 512};
  std::uint32_t sweep_seeds = 51;
  double sweep_p = 0.5;
  std::uint64_t sweep_gen_seed = 7;
  std::string sweep_out;
  sweep_cmd->add_option("--sizes", sweep_sizes, "node counts")->delimiter(',');
  sweep_cmd->add_option("--seeds", sweep_seeds, "trials per size");
  sweep_cmd->add_option("--p", sweep_p, "edge probability");
  sweep_cmd->add_option("--gen-seed", sweep_gen_seed, "graph seed");
  sweep_cmd->add_option("--out", sweep_out, "write fit and points here");

  // ---- replay
  auto* replay_cmd = app.add_subcommand("replay", "re-run one seed of a report");
  std::string replay_report;
  std::uint64_t replay_seed = 1;
  std::string replay_trace;
  replay_cmd->add_option("--report", replay_report, "report file")->required();
  replay_cmd->add_option("--seed", replay_seed, "seed to replay")->required();
  replay_cmd->add_option("--trace", replay_trace, "write the replayed trace (csv)");

  // ---- gen-scenario
  auto* gen_cmd = app.add_subcommand("gen-scenario", "emit a scenario file");
  ScenarioCli gen_sc;
  gen_sc.attach(gen_cmd);
  std::string gen_out = "scenario.json";
  gen_cmd->add_option("--out", gen_out, "output path");

  // ---- verify-trace
  auto* verify_cmd = app.add_subcommand("verify-trace", "check a trace file");
  std::string v_scenario, v_trace;
  Round v_window = 144;
  bool v_dump = false;
  verify_cmd->add_option("--scenario", v_scenario, "scenario file")->required();
  verify_cmd->add_option("--trace", v_trace, "trace csv")->required();
  verify_cmd->add_option("--slow-change-window", v_window, "audit window length");
  verify_cmd->add_flag("--dump-violations", v_dump, "print every violation");

  // ---- codec
  auto* codec_cmd = app.add_subcommand("codec", "sequence and block debugging");
  std::size_t codec_prefix = 0;
  std::string codec_encode, codec_decode;
  codec_cmd->add_option("--prefix", codec_prefix, "print carry/parity prefixes");
  codec_cmd->add_option("--encode", codec_encode, "INDEX:BITS, e.g. 2:10");
  codec_cmd->add_option("--decode", codec_decode, "wire bit string");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      ExperimentConfig cfg;
      cfg.scenario = run_sc.spec();
      auto [scenario, behaviors] = cfg.scenario.build();
      cfg.protocol = run_pr.spec(scenario.node_count());
      cfg.protocol.behaviors = behaviors;
      cfg.seed_base = seed_base;
      cfg.seed_count = seeds;
      cfg.round_cap = cap;
      if (!scenario_out.empty()) scenario.save_file(scenario_out);
      auto rep = run_batch(cfg);
      if (!trace_out.empty()) {
        auto out = replay(cfg, cfg.seed_list().front());
        std::ofstream f(trace_out);
        out.trace.write_csv(f);
      }
      if (!report_out.empty()) rep.save_file(report_out);
      print_summary(rep);
      return exit_code(rep);
    }

    if (*sweep_cmd) {
      std::vector<std::pair<double, double>> points;
      std::cout << "n,median,timeouts\n";
      for (NodeId n : sweep_sizes) {
        ExperimentConfig cfg;
        cfg.scenario.kind = ScenarioSpec::Kind::standard;
        cfg.scenario.family = GraphFamily::gnp;
        cfg.scenario.n = n;
        cfg.scenario.params.p = sweep_p;
        cfg.scenario.params.seed = sweep_gen_seed;
        cfg.protocol = sweep_pr.spec(n);
        cfg.seed_count = sweep_seeds;
        auto rep = run_batch(cfg);
        auto med = rep.stabilization_quantile(0.5);
        if (!med) throw std::runtime_error("no stabilized trials at n=" + std::to_string(n));
        points.emplace_back(n, *med);
        std::cout << n << ',' << *med << ',' << rep.timeouts() << "\n";
      }
      const auto fit = fit_scaling(points);
      std::cout << "fitted exponent b=" << fit.exponent << " amplitude=" << fit.amplitude
                << " residual=" << fit.residual << "\n";
      if (!sweep_out.empty()) {
        std::ofstream f(sweep_out);
        f << "{\"exponent\":" << fit.exponent << ",\"amplitude\":" << fit.amplitude
          << ",\"residual\":" << fit.residual << "}\n";
      }
      return 0;
    }

    if (*replay_cmd) {
      std::ifstream f(replay_report);
      if (!f) throw std::runtime_error("cannot open " + replay_report);
      std::stringstream ss;
      ss << f.rdbuf();
      const auto j = nlohmann::json::parse(ss.str());
      ExperimentConfig cfg;
      cfg.scenario = ScenarioSpec::from_json_string(j.at("scenario").dump());
      cfg.protocol = ProtocolSpec::from_json_string(j.at("protocol").dump());
      cfg.round_cap = j.value("round_cap", Round{0});
      auto out = replay(cfg, replay_seed);
      std::uint64_t recorded = 0;
      bool found = false;
      for (const auto& t : j.at("trials")) {
        if (t.at("seed").get<std::uint64_t>() == replay_seed) {
          recorded = t.at("digest").get<std::uint64_t>();
          found = true;
        }
      }
      if (!found) throw std::runtime_error("seed not present in the report");
      const std::uint64_t fresh = out.trace.digest();
      std::cout << "recorded digest " << recorded << ", replayed digest " << fresh
                << (recorded == fresh ? " (identical)" : " (MISMATCH)") << "\n";
      if (!replay_trace.empty()) {
        std::ofstream tf(replay_trace);
        out.trace.write_csv(tf);
      }
      return recorded == fresh ? 0 : 1;
    }

    if (*gen_cmd) {
      auto [scenario, behaviors] = gen_sc.spec().build();
      scenario.save_file(gen_out);
      std::cout << "wrote " << gen_out << " (" << scenario.node_count() << " nodes, "
                << scenario.edge_count() << " edges)\n";
      return 0;
    }

    if (*verify_cmd) {
      auto scenario = std::make_shared<const Scenario>(Scenario::load_file(v_scenario));
      std::ifstream f(v_trace);
      if (!f) throw std::runtime_error("cannot open " + v_trace);
      auto trace = Trace::read_csv(f, scenario);
      const Round last = trace.round_count() - 1;
      auto verdict = check_mis(trace, last);
      const auto stab = stabilization_round(trace);
      const double lambdas[] = {0.25, 0.5, 1.0, 2.0};
      auto slow = audit_slow_change(trace, lambdas, v_window,
                                    v_dump ? 1u << 20 : 16u);
      std::cout << "final round " << last << ": independent=" << verdict.independent
                << " maximal=" << verdict.maximal << "\n";
      std::cout << "stabilization: "
                << (stab ? std::to_string(*stab) : std::string("none")) << "\n";
      std::cout << "slow-change violations: " << slow.size() << "\n";
      if (v_dump) {
        for (const auto& v : verdict.violations)
          std::cout << "mis violation: round " << v.round << " nodes " << v.a << "," << v.b
                    << " (" << v.rule << ")\n";
        for (const auto& v : slow)
          std::cout << "slow-change: center " << v.center << " t=" << v.t
                    << " t'=" << v.t_prime << " lambda=" << v.lambda << "\n";
      }
      return verdict.independent && verdict.maximal && slow.empty() ? 0 : 1;
    }

    if (*codec_cmd) {
      if (codec_prefix) {
        std::cout << "carry:  " << codec::carry_prefix(codec_prefix) << "\n";
        std::cout << "parity: " << codec::parity_prefix(codec_prefix) << "\n";
      }
      if (!codec_encode.empty()) {
        const auto colon = codec_encode.find(':');
        if (colon == std::string::npos)
          throw std::runtime_error("--encode wants INDEX:BITS");
        const std::uint64_t idx = std::stoull(codec_encode.substr(0, colon));
        std::vector<codec::Bit> data;
        for (char ch : codec_encode.substr(colon + 1))
          data.push_back(ch == '1' ? 1 : 0);
        for (codec::Bit b : codec::encode_block(idx, data)) std::cout << int(b);
        std::cout << "\n";
      }
      if (!codec_decode.empty()) {
        std::vector<codec::Bit> bits;
        for (char ch : codec_decode) bits.push_back(ch == '1' ? 1 : 0);
        for (const auto& blk : codec::decode_stream(bits)) {
          std::cout << "block " << blk.index << " data ";
          for (codec::Bit b : blk.data) std::cout << int(b);
          std::cout << " at [" << blk.begin << "," << blk.end << "]\n";
        }
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
