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

// Adversary forcing any deterministic preemptive algorithm to a ratio of at
// least C, for any C below R ~ 4.9674.
//
// Step 1 offers (x_1, ?) twice with weight w_1; the held copy becomes
// (a_1, x_1), the other (b_1, x_1). At step s < n the algorithm holds one
// edge e_{s-1}, either chain-kind (a_{s-1}, x_{s-1}) of weight w_{s-1} or
// escape-kind (c_{s-1}, y_{s-1}) of weight w'_{s-1}. The adversary offers two
// edges of weight w_s at x_s = a_{s-1} (chain) or c_{s-1} (escape). If the
// algorithm switches to one of them, that one is labelled (x_s, a_s) and the
// state is chain-kind again. Otherwise a third edge (y_s, c_s) of weight w'_s
// arrives at y_s = x_{s-1} (chain) or y_{s-1} (escape); taking it makes the
// state escape-kind, declining it ends the game with ratio >= C. Step n offers
// a single edge (x_n, b_n) of weight w_n, skipped when w_n <= 0, after which
// the ratio is at least S_{n-1} / w_{n-1} >= C.
//
// Throughout, the adversary keeps an explicit optimal-side matching:
//   chain kind   one edge of each weight w_1..w_s, the w_s one being (x_s, b_s)
//   escape kind  w_1..w_s except w_j, plus (c_s, y_s), where y_s = x_j

#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ssmatch/error.hpp"
#include "ssmatch/graph.hpp"
#include "ssmatch/preemptive.hpp"
#include "ssmatch/sequences.hpp"

namespace ssmatch {

struct AdversaryConfig {
  double C = 4.9;
  std::size_t max_steps = 1'000'000;
  // Contract breaches throw ContractViolation when set; otherwise the game
  // ends and reports the step in GameResult::violation_step.
  bool stop_on_violation = true;

  void validate() const {
    check_target_ratio(C);
    if (max_steps == 0) throw ValidationError("max_steps must be positive");
  }
};

enum class HoldKind { none, chain, escape };

enum class CheckpointKind { chain_decline, escape_decline, final_step };

enum class GameOutcome { chain_decline, escape_decline, final_step, unbounded, contract_violation };

struct EdgeRecord {
  std::size_t step = 0;
  std::string label;
  Edge edge;
  std::vector<Edge> held_after;
};

struct StepRecord {
  std::size_t step = 0;
  HoldKind kind = HoldKind::none;
  std::optional<Edge> algorithm_edge;
  std::vector<Edge> opt_edges;
  double opt_weight = 0.0;
  double alg_weight = 0.0;
  std::optional<std::size_t> missing_index;
  std::size_t edges_presented = 0;  // prefix of the edge log visible at this point
};

struct GameState {
  std::size_t step = 0;
  HoldKind kind = HoldKind::none;
  std::optional<Edge> algorithm_edge;
  std::map<std::string, VertexId> label_map;
  std::vector<Edge> opt_edges;
  std::optional<std::size_t> missing_index;
  std::optional<CheckpointKind> decision;  // set at a decision point
  std::vector<StepRecord> transcript;
};

struct CheckpointViolation {
  CheckpointKind kind = CheckpointKind::final_step;
  std::size_t step = 0;
  double opt_value = 0.0;
  double alg_weight = 0.0;
  double ratio = 0.0;
};

// Ratio the table guarantees at the decision point recorded in `state`:
//   chain decline at step s    (S_{s-2} + w_s + w'_s) / w_{s-1}      = C
//   escape decline at step s   (S_{s-1} - w_j + w_s + w'_s) / w'_{s-1} >= C
//   final step n               S_{n-1} / (held weight)               >= C
// Returns it when it reaches C (relative tolerance 1e-9).
inline std::optional<CheckpointViolation> ratio_checkpoint(const GameState& state,
                                                           const SequenceTable& table,
                                                           double C) {
  if (!state.decision) return std::nullopt;
  const std::size_t s = state.step;
  CheckpointViolation v;
  v.kind = *state.decision;
  v.step = s;
  v.alg_weight = state.algorithm_edge ? state.algorithm_edge->weight : 0.0;
  switch (v.kind) {
    case CheckpointKind::chain_decline:
      v.opt_value = table.S(s - 2) + table.w(s) + table.w_prime(s);
      break;
    case CheckpointKind::escape_decline:
      if (!state.missing_index) throw ValidationError("escape state without missing index");
      v.opt_value = table.S(s - 1) - table.w(*state.missing_index) + table.w(s) +
                    table.w_prime(s);
      break;
    case CheckpointKind::final_step:
      v.opt_value = table.S(table.n() - 1);
      break;
  }
  v.ratio = v.alg_weight > 0.0 ? v.opt_value / v.alg_weight
                               : std::numeric_limits<double>::infinity();
  if (v.ratio >= C * (1.0 - 1e-9)) return v;
  return std::nullopt;
}

struct GameResult {
  std::string victim;
  double C = 0.0;
  std::size_t sequence_length = 0;
  GameOutcome outcome = GameOutcome::final_step;
  double achieved_ratio = 0.0;  // +inf when unbounded
  bool unbounded = false;
  std::size_t steps_played = 0;
  std::optional<std::size_t> violation_step;
  std::string contract_issue;
  std::optional<CheckpointViolation> checkpoint;
  double opt_weight = 0.0;
  double alg_weight = 0.0;
  std::vector<Edge> opt_edges;
  std::vector<Edge> alg_edges;
  std::size_t num_vertices = 0;
  std::map<std::string, VertexId> label_map;
  std::vector<EdgeRecord> edge_log;
  std::vector<StepRecord> steps;
};

namespace detail {

inline std::string label(char role, std::size_t i) {
  return std::string(1, role) + "_" + std::to_string(i);
}

inline std::string edge_label(char r1, std::size_t i1, char r2, std::size_t i2) {
  return "(" + label(r1, i1) + "," + label(r2, i2) + ")";
}

inline VertexId other_end(const Edge& e, VertexId x) { return e.u == x ? e.v : e.u; }

class AdversaryGame {
 public:
  AdversaryGame(PreemptiveAlgorithm& victim, const SequenceTable& table,
                const AdversaryConfig& config)
      : victim_(victim), table_(table), config_(config), xb_edge_(table.n() + 1) {
    result_.victim = victim.name();
    result_.C = config.C;
    result_.sequence_length = table.n();
  }

  GameResult play() {
    if (!opening()) return finish_contract();
    if (held_.empty()) return finish_unbounded();
    const std::size_t n = table_.n();
    for (std::size_t s = 2; s < n; ++s) {
      if (s > config_.max_steps) throw ValidationError("game exceeded max_steps");
      const auto outcome = middle_step(s);
      if (outcome == StepOutcome::contract) return finish_contract();
      if (outcome == StepOutcome::unbounded) return finish_unbounded();
      if (outcome == StepOutcome::declined) return finish_checkpoint();
    }
    if (!final_step()) return finish_contract();
    if (held_.empty()) return finish_unbounded();
    return finish_checkpoint();
  }

 private:
  enum class StepOutcome { continued, declined, unbounded, contract };

  VertexId fresh() { return next_vertex_++; }
  VertexId id(const std::string& name) const { return state_.label_map.at(name); }
  void name(const std::string& label, VertexId v) { state_.label_map[label] = v; }

  // Hands e to the victim and audits its reply. False means the victim broke
  // the contract and the game is over.
  bool present(const Edge& e, std::string edge_name) {
    audit_.present(e);
    victim_.on_edge(e);
    held_ = victim_.current_matching();
    result_.edge_log.push_back(EdgeRecord{state_.step + 1, std::move(edge_name), e, held_.edges()});
    if (auto issue = audit_.check(held_)) {
      if (config_.stop_on_violation) throw ContractViolation(issue->step, issue->what);
      result_.violation_step = state_.step + 1;
      result_.contract_issue = issue->what;
      return false;
    }
    return true;
  }

  void relabel_last(std::size_t back, std::string edge_name) {
    result_.edge_log[result_.edge_log.size() - 1 - back].label = std::move(edge_name);
  }

  void opt_remove(const Edge& e) {
    std::erase_if(state_.opt_edges, [&](const Edge& f) { return edge_key(f) == edge_key(e); });
  }
  void opt_add(const Edge& e) { state_.opt_edges.push_back(e); }

  void record_step(std::size_t s) {
    state_.step = s;
    StepRecord r;
    r.step = s;
    r.kind = state_.kind;
    r.algorithm_edge = state_.algorithm_edge;
    r.opt_edges = state_.opt_edges;
    r.opt_weight = Matching(state_.opt_edges).weight();
    r.alg_weight = held_.weight();
    r.missing_index = state_.missing_index;
    r.edges_presented = result_.edge_log.size();
    state_.transcript.push_back(std::move(r));
  }

  bool opening() {
    const VertexId x = fresh();
    const VertexId p = fresh();
    const VertexId q = fresh();
    const double w1 = table_.w(1);
    const Edge first{p, x, w1};
    const Edge second{q, x, w1};
    if (!present(first, "(?,x_1)") || !present(second, "(?,x_1)")) return false;
    const bool second_held = held_.contains(second) && !held_.contains(first);
    const Edge held = second_held ? second : first;
    const Edge other = second_held ? first : second;
    name("x_1", x);
    name("a_1", other_end(held, x));
    name("b_1", other_end(other, x));
    relabel_last(second_held ? 0 : 1, edge_label('a', 1, 'x', 1));
    relabel_last(second_held ? 1 : 0, edge_label('b', 1, 'x', 1));
    xb_edge_[1] = other;
    opt_add(other);
    state_.kind = HoldKind::chain;
    state_.algorithm_edge = held_.contains(held) ? std::optional<Edge>(held) : std::nullopt;
    record_step(1);
    return true;
  }

  StepOutcome middle_step(std::size_t s) {
    const std::size_t i = s - 1;
    const bool from_chain = state_.kind == HoldKind::chain;
    const Edge previous = *state_.algorithm_edge;
    const VertexId x = from_chain ? id(label('a', i)) : id(label('c', i));
    name(label('x', s), x);
    const VertexId p = fresh();
    const VertexId q = fresh();
    const double ws = table_.w(s);
    const Edge n1{x, p, ws};
    const Edge n2{x, q, ws};
    if (!present(n1, "(x_" + std::to_string(s) + ",?)")) return StepOutcome::contract;
    if (!present(n2, "(x_" + std::to_string(s) + ",?)")) return StepOutcome::contract;

    const bool h1 = held_.contains(n1);
    const bool h2 = held_.contains(n2);
    if (h1 || h2) {
      const Edge taken = h1 ? n1 : n2;
      const Edge other = h1 ? n2 : n1;
      name(label('a', s), other_end(taken, x));
      name(label('b', s), other_end(other, x));
      relabel_last(h1 ? 1 : 0, edge_label('x', s, 'a', s));
      relabel_last(h1 ? 0 : 1, edge_label('x', s, 'b', s));
      if (!from_chain) {
        opt_remove(previous);
        opt_add(*xb_edge_[*state_.missing_index]);
        state_.missing_index.reset();
      }
      opt_add(other);
      xb_edge_[s] = other;
      state_.kind = HoldKind::chain;
      state_.algorithm_edge = taken;
      record_step(s);
      return StepOutcome::continued;
    }

    name(label('a', s), p);
    name(label('b', s), q);
    relabel_last(1, edge_label('x', s, 'a', s));
    relabel_last(0, edge_label('x', s, 'b', s));
    if (held_.empty()) {
      state_.algorithm_edge.reset();
      record_step(s);
      return StepOutcome::unbounded;
    }

    const VertexId y = from_chain ? id(label('x', i)) : id(label('y', i));
    name(label('y', s), y);
    const VertexId c = fresh();
    name(label('c', s), c);
    const Edge third{y, c, table_.w_prime(s)};
    if (!present(third, edge_label('y', s, 'c', s))) return StepOutcome::contract;

    if (held_.contains(third)) {
      if (from_chain) {
        opt_remove(*xb_edge_[i]);
        opt_add(n2);
        state_.missing_index = i;
      } else {
        opt_remove(previous);
        opt_add(n1);
      }
      opt_add(third);
      xb_edge_[s] = n2;
      state_.kind = HoldKind::escape;
      state_.algorithm_edge = third;
      record_step(s);
      return StepOutcome::continued;
    }
    if (held_.empty()) {
      state_.algorithm_edge.reset();
      record_step(s);
      return StepOutcome::unbounded;
    }

    // Declined both switches: the optimum reroutes around the held edge.
    if (from_chain) {
      opt_remove(*xb_edge_[i]);
      opt_add(third);
      opt_add(n2);
      state_.decision = CheckpointKind::chain_decline;
    } else {
      opt_remove(previous);
      opt_add(n1);
      opt_add(third);
      state_.decision = CheckpointKind::escape_decline;
    }
    record_step(s);
    return StepOutcome::declined;
  }

  bool final_step() {
    const std::size_t n = table_.n();
    const bool from_chain = state_.kind == HoldKind::chain;
    const Edge previous = *state_.algorithm_edge;
    const VertexId x = from_chain ? id(label('a', n - 1)) : id(label('c', n - 1));
    name(label('x', n), x);
    const double wn = table_.w(n);
    if (wn > 0.0) {
      const VertexId b = fresh();
      name(label('b', n), b);
      const Edge last{x, b, wn};
      if (!present(last, edge_label('x', n, 'b', n))) return false;
      if (!from_chain) {
        opt_remove(previous);
        opt_add(*xb_edge_[*state_.missing_index]);
        state_.missing_index.reset();
      }
      opt_add(last);
    } else if (!from_chain) {
      std::vector<Edge> swapped = state_.opt_edges;
      std::erase_if(swapped, [&](const Edge& f) { return edge_key(f) == edge_key(previous); });
      swapped.push_back(*xb_edge_[*state_.missing_index]);
      if (Matching(swapped).weight() > Matching(state_.opt_edges).weight()) {
        state_.opt_edges = std::move(swapped);
        state_.missing_index.reset();
      }
    }
    state_.algorithm_edge = held_.empty() ? std::nullopt : std::optional<Edge>(held_.edges().front());
    state_.decision = CheckpointKind::final_step;
    record_step(n);
    return true;
  }

  GameResult finish_common(GameOutcome outcome) {
    result_.outcome = outcome;
    result_.steps_played = state_.step;
    result_.opt_edges = state_.opt_edges;
    result_.opt_weight = Matching(state_.opt_edges).weight();
    result_.alg_edges = held_.edges();
    result_.alg_weight = held_.weight();
    result_.num_vertices = next_vertex_;
    result_.label_map = state_.label_map;
    result_.steps = state_.transcript;
    if (result_.alg_weight > 0.0) {
      result_.achieved_ratio = result_.opt_weight / result_.alg_weight;
    } else {
      result_.achieved_ratio = std::numeric_limits<double>::infinity();
      result_.unbounded = result_.opt_weight > 0.0;
    }
    return result_;
  }

  GameResult finish_unbounded() { return finish_common(GameOutcome::unbounded); }

  GameResult finish_contract() { return finish_common(GameOutcome::contract_violation); }

  GameResult finish_checkpoint() {
    result_.checkpoint = ratio_checkpoint(state_, table_, config_.C);
    GameOutcome outcome = GameOutcome::final_step;
    if (*state_.decision == CheckpointKind::chain_decline) outcome = GameOutcome::chain_decline;
    if (*state_.decision == CheckpointKind::escape_decline) outcome = GameOutcome::escape_decline;
    return finish_common(outcome);
  }

  PreemptiveAlgorithm& victim_;
  const SequenceTable& table_;
  AdversaryConfig config_;
  IrrevocabilityAudit audit_;
  Matching held_;
  GameState state_;
  GameResult result_;
  VertexId next_vertex_ = 0;
  std::vector<std::optional<Edge>> xb_edge_;  // step j -> its (x_j, b_j)-side edge
};

}  // namespace detail

// Plays the construction against a fresh victim. Throws ValidationError for a
// bad config and ContractViolation when the victim breaks irrevocability and
// config.stop_on_violation is set.
inline GameResult run_adversary(PreemptiveAlgorithm& victim, const AdversaryConfig& config) {
  config.validate();
  const SequenceTable table = generate_sequences(config.C, config.max_steps);
  detail::AdversaryGame game(victim, table, config);
  return game.play();
}

inline const char* to_string(GameOutcome o) {
  switch (o) {
    case GameOutcome::chain_decline: return "chain_decline";
    case GameOutcome::escape_decline: return "escape_decline";
    case GameOutcome::final_step: return "final_step";
    case GameOutcome::unbounded: return "unbounded";
    case GameOutcome::contract_violation: return "contract_violation";
  }
  return "?";
}

inline const char* to_string(HoldKind k) {
  switch (k) {
    case HoldKind::none: return "none";
    case HoldKind::chain: return "chain";
    case HoldKind::escape: return "escape";
  }
  return "?";
}

inline const char* to_string(CheckpointKind k) {
  switch (k) {
    case CheckpointKind::chain_decline: return "chain_decline";
    case CheckpointKind::escape_decline: return "escape_decline";
    case CheckpointKind::final_step: return "final_step";
  }
  return "?";
}

}  // namespace ssmatch
