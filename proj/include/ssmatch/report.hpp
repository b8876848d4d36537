// Copyright 2026 The ssmatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON forms of run reports, game results, certificates and sequence tables.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssmatch/adversary.hpp"
#include "ssmatch/certificate.hpp"
#include "ssmatch/graph.hpp"
#include "ssmatch/sequences.hpp"

namespace ssmatch {

using Json = nlohmann::ordered_json;

inline Json edge_to_json(const Edge& e) { return Json::array({e.u, e.v, e.weight}); }

inline Edge edge_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw ValidationError("edge must be [u, v, weight]");
  return Edge{j[0].get<VertexId>(), j[1].get<VertexId>(), j[2].get<double>()};
}

inline Json edges_to_json(std::span<const Edge> edges) {
  Json out = Json::array();
  for (const Edge& e : edges) out.push_back(edge_to_json(e));
  return out;
}

inline std::vector<Edge> edges_from_json(const Json& j) {
  std::vector<Edge> out;
  for (const Json& e : j) out.push_back(edge_from_json(e));
  return out;
}

// JSON has no infinity; unbounded ratios are written as null.
inline Json ratio_to_json(double r) { return std::isfinite(r) ? Json(r) : Json(nullptr); }

struct RunReport {
  std::string command;
  std::string variant;
  double gamma = 0.0;
  double epsilon = 0.0;
  std::optional<double> delta;
  std::optional<int> q;
  std::optional<std::size_t> best_copy;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> permute_seed;
  bool parallel = false;
  std::string stream_path;
  std::string stream_hash;
  std::size_t num_vertices = 0;
  std::size_t num_edges = 0;
  std::size_t file_passes = 0;
  std::size_t edges_read_per_copy = 0;
  std::vector<Edge> matching;
  double weight = 0.0;
  std::size_t stored_edge_peak = 0;
  std::optional<double> opt_weight;
  std::optional<double> ratio;
  std::optional<Json> certificate;
  double wall_time_ms = 0.0;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

namespace detail {

template <typename T>
void put_optional(Json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> get_optional(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace detail

inline Json to_json(const RunReport& r) {
  Json j;
  j["command"] = r.command;
  j["variant"] = r.variant;
  j["gamma"] = r.gamma;
  j["epsilon"] = r.epsilon;
  detail::put_optional(j, "delta", r.delta);
  detail::put_optional(j, "q", r.q);
  detail::put_optional(j, "best_copy", r.best_copy);
  j["seed"] = r.seed;
  detail::put_optional(j, "permute_seed", r.permute_seed);
  j["parallel"] = r.parallel;
  j["stream"] = {{"path", r.stream_path},
                 {"fnv1a64", r.stream_hash},
                 {"num_vertices", r.num_vertices},
                 {"num_edges", r.num_edges},
                 {"file_passes", r.file_passes},
                 {"edges_read_per_copy", r.edges_read_per_copy}};
  j["result"] = {{"matching", edges_to_json(r.matching)},
                 {"weight", r.weight},
                 {"stored_edge_peak", r.stored_edge_peak}};
  detail::put_optional(j["result"], "opt_weight", r.opt_weight);
  detail::put_optional(j["result"], "ratio", r.ratio);
  j["certificate"] = r.certificate ? *r.certificate : Json(nullptr);
  j["wall_time_ms"] = r.wall_time_ms;
  return j;
}

inline RunReport run_report_from_json(const Json& j) {
  try {
    RunReport r;
    r.command = j.at("command").get<std::string>();
    r.variant = j.at("variant").get<std::string>();
    r.gamma = j.at("gamma").get<double>();
    r.epsilon = j.at("epsilon").get<double>();
    r.delta = detail::get_optional<double>(j, "delta");
    r.q = detail::get_optional<int>(j, "q");
    r.best_copy = detail::get_optional<std::size_t>(j, "best_copy");
    r.seed = j.at("seed").get<std::uint64_t>();
    r.permute_seed = detail::get_optional<std::uint64_t>(j, "permute_seed");
    r.parallel = j.at("parallel").get<bool>();
    const Json& s = j.at("stream");
    r.stream_path = s.at("path").get<std::string>();
    r.stream_hash = s.at("fnv1a64").get<std::string>();
    r.num_vertices = s.at("num_vertices").get<std::size_t>();
    r.num_edges = s.at("num_edges").get<std::size_t>();
    r.file_passes = s.at("file_passes").get<std::size_t>();
    r.edges_read_per_copy = s.at("edges_read_per_copy").get<std::size_t>();
    const Json& res = j.at("result");
    r.matching = edges_from_json(res.at("matching"));
    r.weight = res.at("weight").get<double>();
    r.stored_edge_peak = res.at("stored_edge_peak").get<std::size_t>();
    r.opt_weight = detail::get_optional<double>(res, "opt_weight");
    r.ratio = detail::get_optional<double>(res, "ratio");
    if (j.contains("certificate") && !j.at("certificate").is_null()) r.certificate = j.at("certificate");
    r.wall_time_ms = j.at("wall_time_ms").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed run report: ") + e.what());
  }
}

inline Json to_json(const AnalysisCertificate& c) {
  Json per_vertex = Json::array();
  for (const auto& [x, a] : c.per_vertex_association) {
    per_vertex.push_back({{"vertex", x}, {"class", a.class_index}, {"weight", a.weight}});
  }
  return {{"gamma", c.gamma},
          {"delta", c.delta},
          {"alg_weight", c.alg_weight},
          {"opt_weight", c.opt_weight},
          {"opt_rounded", c.opt_rounded},
          {"total_associated_weight", c.total_associated_weight},
          {"rounding_holds", c.rounding_holds()},
          {"association_covers_opt", c.association_covers_opt()},
          {"charging_holds", c.charging_holds()},
          {"chain_holds", c.chain_holds()},
          {"certified_ratio", c.certified_ratio()},
          {"per_vertex_association", per_vertex}};
}

inline Json to_json(const SequenceTable& t) {
  return {{"C", t.C()},
          {"n", t.n()},
          {"w", t.w_values()},
          {"w_prime", t.w_prime_values()},
          {"S", t.S_values()}};
}

inline Json to_json(const IdentityReport& r) {
  Json j{{"ok", r.ok}, {"checked", r.checked}, {"max_relative_error", r.max_relative_error}};
  detail::put_optional(j, "first_failing_index", r.first_failing_index);
  j["failing_identity"] = r.failing_identity;
  return j;
}

inline Json to_json(const EdgeRecord& r) {
  return {{"step", r.step},
          {"label", r.label},
          {"edge", edge_to_json(r.edge)},
          {"held_after", edges_to_json(r.held_after)}};
}

inline Json to_json(const GameResult& g, bool include_steps = true) {
  Json j;
  j["victim"] = g.victim;
  j["C"] = g.C;
  j["sequence_length"] = g.sequence_length;
  j["outcome"] = to_string(g.outcome);
  j["achieved_ratio"] = ratio_to_json(g.achieved_ratio);
  j["unbounded"] = g.unbounded;
  j["steps_played"] = g.steps_played;
  detail::put_optional(j, "violation_step", g.violation_step);
  j["contract_issue"] = g.contract_issue;
  if (g.checkpoint) {
    j["checkpoint"] = {{"kind", to_string(g.checkpoint->kind)},
                       {"step", g.checkpoint->step},
                       {"opt_value", g.checkpoint->opt_value},
                       {"alg_weight", g.checkpoint->alg_weight},
                       {"ratio", ratio_to_json(g.checkpoint->ratio)}};
  } else {
    j["checkpoint"] = nullptr;
  }
  j["opt_weight"] = g.opt_weight;
  j["alg_weight"] = g.alg_weight;
  j["opt_edges"] = edges_to_json(g.opt_edges);
  j["alg_edges"] = edges_to_json(g.alg_edges);
  j["num_vertices"] = g.num_vertices;
  j["edges_presented"] = g.edge_log.size();
  Json labels = Json::object();
  for (const auto& [name, id] : g.label_map) labels[name] = id;
  j["labels"] = labels;
  if (include_steps) {
    Json steps = Json::array();
    for (const StepRecord& s : g.steps) {
      Json row{{"step", s.step},
               {"kind", to_string(s.kind)},
               {"algorithm_edge", s.algorithm_edge ? edge_to_json(*s.algorithm_edge) : Json(nullptr)},
               {"opt_weight", s.opt_weight},
               {"alg_weight", s.alg_weight},
               {"opt_edges", edges_to_json(s.opt_edges)}};
      detail::put_optional(row, "missing_index", s.missing_index);
      steps.push_back(std::move(row));
    }
    j["steps"] = std::move(steps);
  }
  return j;
}

}  // namespace ssmatch
