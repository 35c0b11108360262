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

#include "beep/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace beep {

Scenario Scenario::make(NodeId node_count, std::vector<Edge> edges,
                        std::vector<Round> wake_rounds,
                        std::map<NodeId, Round> crash_rounds) {
  if (wake_rounds.size() != node_count)
    throw std::invalid_argument("scenario: wake entry required for every node");

  std::set<Edge> seen;
  for (auto& [a, b] : edges) {
    if (a >= node_count || b >= node_count)
      throw std::invalid_argument("scenario: edge endpoint out of range");
    if (a == b) throw std::invalid_argument("scenario: self loop");
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second)
      throw std::invalid_argument("scenario: duplicate edge");
  }
  for (const auto& [u, r] : crash_rounds) {
    if (u >= node_count)
      throw std::invalid_argument("scenario: crash node out of range");
    if (r <= wake_rounds[u])
      throw std::invalid_argument("scenario: crash must be strictly after wake");
  }

  Scenario s;
  s.node_count_ = node_count;
  s.edges_ = std::move(edges);
  s.wake_ = std::move(wake_rounds);
  s.crash_ = std::move(crash_rounds);

  std::vector<std::size_t> deg(node_count, 0);
  for (const auto& [a, b] : s.edges_) {
    ++deg[a];
    ++deg[b];
  }
  s.offsets_.assign(node_count + 1, 0);
  for (NodeId u = 0; u < node_count; ++u) s.offsets_[u + 1] = s.offsets_[u] + deg[u];
  s.adjacency_.resize(s.offsets_[node_count]);
  std::vector<std::size_t> cursor(s.offsets_.begin(), s.offsets_.end() - 1);
  for (const auto& [a, b] : s.edges_) {
    s.adjacency_[cursor[a]++] = b;
    s.adjacency_[cursor[b]++] = a;
  }
  for (NodeId u = 0; u < node_count; ++u)
    std::sort(s.adjacency_.begin() + s.offsets_[u], s.adjacency_.begin() + s.offsets_[u + 1]);
  return s;
}

Scenario Scenario::make_synchronous(NodeId node_count, std::vector<Edge> edges) {
  return make(node_count, std::move(edges), std::vector<Round>(node_count, 0));
}

NodeId Scenario::max_degree() const {
  NodeId d = 0;
  for (NodeId u = 0; u < node_count_; ++u) d = std::max(d, degree(u));
  return d;
}

Round Scenario::last_wake() const {
  Round r = 0;
  for (Round w : wake_) r = std::max(r, w);
  return r;
}

bool Scenario::event_after(Round t) const {
  for (Round w : wake_)
    if (w > t) return true;
  for (const auto& [u, r] : crash_)
    if (r > t) return true;
  return false;
}

std::string Scenario::to_json_string() const {
  nlohmann::json j;
  j["nodes"] = node_count_;
  auto& je = j["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : edges_) je.push_back({a, b});
  j["wake"] = wake_;
  if (!crash_.empty()) {
    nlohmann::json jc = nlohmann::json::object();
    for (const auto& [u, r] : crash_) jc[std::to_string(u)] = r;
    j["crash"] = jc;
  }
  return j.dump(2);
}

Scenario Scenario::from_json_string(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  NodeId n = j.at("nodes").get<NodeId>();

  std::vector<Edge> edges;
  for (const auto& e : j.value("edges", nlohmann::json::array()))
    edges.emplace_back(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());

  std::vector<Round> wake(n, 0);
  if (j.contains("wake")) {
    const auto& jw = j["wake"];
    if (jw.is_number()) {
      std::fill(wake.begin(), wake.end(), jw.get<Round>());
    } else if (jw.is_array()) {
      if (jw.size() != n) throw std::invalid_argument("scenario: wake array size mismatch");
      for (NodeId u = 0; u < n; ++u) wake[u] = jw[u].get<Round>();
    } else {
      for (const auto& [key, val] : jw.items()) {
        NodeId u = static_cast<NodeId>(std::stoul(key));
        if (u >= n) throw std::invalid_argument("scenario: wake node out of range");
        wake[u] = val.get<Round>();
      }
    }
  }

  std::map<NodeId, Round> crash;
  if (j.contains("crash")) {
    for (const auto& [key, val] : j["crash"].items())
      crash[static_cast<NodeId>(std::stoul(key))] = val.get<Round>();
  }
  return make(n, std::move(edges), std::move(wake), std::move(crash));
}

void Scenario::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << to_json_string() << '\n';
}

Scenario Scenario::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_string(ss.str());
}

}  // namespace beep
