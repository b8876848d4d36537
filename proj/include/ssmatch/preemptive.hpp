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

// Preemptive online matching: the algorithm holds a feasible matching at all
// times and may drop held edges, but an edge that was rejected or dropped can
// never be held again.

#pragma once

#include <charconv>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ssmatch/bucket_matcher.hpp"
#include "ssmatch/error.hpp"
#include "ssmatch/graph.hpp"

namespace ssmatch {

struct Decision {
  bool accepted = false;
  std::vector<Edge> preempted;
};

class PreemptiveAlgorithm {
 public:
  virtual ~PreemptiveAlgorithm() = default;

  virtual Decision on_edge(const Edge& e) = 0;
  virtual Matching current_matching() const = 0;
  virtual std::string name() const = 0;
};

namespace detail {

// Vertex -> held edge, ordered so current_matching() is deterministic.
class HeldEdges {
 public:
  std::vector<Edge> conflicts(const Edge& e) const {
    std::vector<Edge> out;
    if (auto it = mate_.find(e.u); it != mate_.end()) out.push_back(it->second);
    if (auto it = mate_.find(e.v); it != mate_.end()) {
      if (out.empty() || edge_key(out.front()) != edge_key(it->second)) {
        out.push_back(it->second);
      }
    }
    return out;
  }

  void erase(const Edge& e) {
    mate_.erase(e.u);
    mate_.erase(e.v);
  }

  void insert(const Edge& e) {
    mate_[e.u] = e;
    mate_[e.v] = e;
  }

  Matching matching() const {
    std::vector<Edge> edges;
    for (const auto& [x, e] : mate_) {
      if (x == std::min(e.u, e.v)) edges.push_back(e);
    }
    return Matching(std::move(edges));
  }

 private:
  std::map<VertexId, Edge> mate_;
};

}  // namespace detail

// Accepts e iff w(e) > c * (total weight of the held edges it conflicts with),
// preempting those edges.
class ThresholdPreemptive final : public PreemptiveAlgorithm {
 public:
  explicit ThresholdPreemptive(double c) : c_(c) {
    if (!(c >= 1.0) || !std::isfinite(c)) {
      throw ValidationError("improvement factor c must be >= 1");
    }
  }

  Decision on_edge(const Edge& e) override {
    if (!presented_.insert(edge_key(e)).second) {
      throw ValidationError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                            ") presented twice");
    }
    Decision d;
    const std::vector<Edge> blocking = held_.conflicts(e);
    double blocking_weight = 0.0;
    for (const Edge& f : blocking) blocking_weight += f.weight;
    if (e.weight > c_ * blocking_weight) {
      for (const Edge& f : blocking) held_.erase(f);
      held_.insert(e);
      d.accepted = true;
      d.preempted = blocking;
    }
    return d;
  }

  Matching current_matching() const override { return held_.matching(); }

  std::string name() const override {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), c_);
    return "threshold:" + std::string(buf, ptr);
  }

  double improvement_factor() const { return c_; }

 private:
  double c_;
  detail::HeldEdges held_;
  std::unordered_set<std::uint64_t> presented_;
};

// Takes every edge that fits, never preempts.
class HoldFirst final : public PreemptiveAlgorithm {
 public:
  Decision on_edge(const Edge& e) override {
    Decision d;
    if (held_.conflicts(e).empty()) {
      held_.insert(e);
      d.accepted = true;
    }
    return d;
  }

  Matching current_matching() const override { return held_.matching(); }
  std::string name() const override { return "hold-first"; }

 private:
  detail::HeldEdges held_;
};

struct ContractIssue {
  std::size_t step = 0;  // 1-based index of the presented edge
  std::string what;
};

// Replays a transcript against the preemptive contract. Call present() before
// handing an edge to the algorithm and check() with the matching it holds
// afterwards.
class IrrevocabilityAudit {
 public:
  void present(const Edge& e) {
    ++step_;
    current_ = edge_key(e);
    presented_.emplace(current_, e);
  }

  std::optional<ContractIssue> check(const Matching& held) {
    const MatchingReport report = validate_matching(held.edges());
    if (!report.ok()) return ContractIssue{step_, "held edges do not form a matching"};
    std::unordered_set<std::uint64_t> now;
    for (const Edge& e : held.edges()) {
      const std::uint64_t key = edge_key(e);
      auto it = presented_.find(key);
      if (it == presented_.end()) {
        return ContractIssue{step_, "holds an edge that was never presented"};
      }
      if (it->second.weight != e.weight) {
        return ContractIssue{step_, "holds an edge with an altered weight"};
      }
      if (!held_.contains(key) && key != current_) {
        return ContractIssue{step_, "resurrected edge (" + std::to_string(e.u) + ", " +
                                        std::to_string(e.v) + ")"};
      }
      now.insert(key);
    }
    held_ = std::move(now);
    return std::nullopt;
  }

  std::size_t steps() const { return step_; }

 private:
  std::size_t step_ = 0;
  std::uint64_t current_ = 0;
  std::unordered_map<std::uint64_t, Edge> presented_;
  std::unordered_set<std::uint64_t> held_;
};

// Exposes a bucket run as if it were preemptive: after every edge the held set
// is the greedy projection of the stored class matchings. The bucket
// algorithm keeps edges it no longer holds and may hold them again later, so
// the view reports
//   first_retained_drop_step  an edge left the held set but stayed in memory
//   first_resurrection_step   a previously dropped or rejected edge is held
//                             again, breaking irrevocability
// The view itself never throws on either event.
class BucketPreemptiveView final : public PreemptiveAlgorithm {
 public:
  explicit BucketPreemptiveView(BucketConfig config) : state_(config) {}

  Decision on_edge(const Edge& e) override {
    audit_.present(e);
    state_.process_edge(e);
    Matching next = state_.finalize();
    Decision d;
    d.accepted = next.contains(e);
    for (const Edge& f : held_.edges()) {
      if (!next.contains(f)) {
        d.preempted.push_back(f);
        if (!first_retained_drop_step_ && state_.stores(f)) {
          first_retained_drop_step_ = audit_.steps();
        }
      }
    }
    if (auto issue = audit_.check(next); issue && !first_resurrection_step_) {
      first_resurrection_step_ = issue->step;
    }
    held_ = std::move(next);
    return d;
  }

  Matching current_matching() const override { return held_; }
  std::string name() const override { return "bucket-view"; }

  std::optional<std::size_t> first_resurrection_step() const { return first_resurrection_step_; }
  std::optional<std::size_t> first_retained_drop_step() const { return first_retained_drop_step_; }
  const BucketState& state() const { return state_; }

 private:
  BucketState state_;
  Matching held_;
  IrrevocabilityAudit audit_;
  std::optional<std::size_t> first_resurrection_step_;
  std::optional<std::size_t> first_retained_drop_step_;
};

// Names accepted by make_victim: "hold-first" and "threshold:<c>".
inline std::unique_ptr<PreemptiveAlgorithm> make_victim(std::string_view name) {
  if (name == "hold-first") return std::make_unique<HoldFirst>();
  constexpr std::string_view kThreshold = "threshold:";
  if (name.starts_with(kThreshold)) {
    const std::string_view arg = name.substr(kThreshold.size());
    double c = 0.0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), c);
    if (ec != std::errc() || ptr != arg.data() + arg.size()) {
      throw ValidationError("malformed threshold factor in '" + std::string(name) + "'");
    }
    return std::make_unique<ThresholdPreemptive>(c);
  }
  throw ValidationError("unknown victim '" + std::string(name) + "'");
}

inline std::vector<std::string> registered_victims() {
  return {"threshold:1", "threshold:1.5", "threshold:2", "hold-first"};
}

}  // namespace ssmatch
