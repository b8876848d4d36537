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

// One-pass weighted matching by geometric weight classes.
//
// Class i holds the weights in [gamma^(i+delta), gamma^(i+1+delta)). The state
// keeps one maximal unweighted matching per class whose interval meets
// [2*epsilon*w_max/n, w_max]; everything else is dropped on arrival or pruned
// when w_max grows. At the end of the stream the stored edges are scanned
// from the heaviest class down and picked greedily.
//
// Three drivers share that state:
//   run_deterministic  delta = 0
//   run_shifted        a fixed delta in [0, 1)
//   run_ensemble       q copies at delta = 0, 1/q, ..., (q-1)/q fed in one
//                      pass; the heaviest result wins, ties to the smallest
//                      delta.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <future>
#include <limits>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "ssmatch/error.hpp"
#include "ssmatch/graph.hpp"

namespace ssmatch {

using ClassIndex = std::int64_t;

enum class GreedyOrder {
  by_class,   // decreasing class index, insertion order inside a class
  by_weight,  // decreasing exact weight; experimental
};

struct BucketConfig {
  double gamma = 2.0;
  double delta = 0.0;
  double epsilon = 0.1;
  std::size_t num_vertices = 0;
  GreedyOrder greedy_order = GreedyOrder::by_class;

  void validate() const {
    if (!(gamma > 1.0) || !std::isfinite(gamma)) {
      throw ValidationError("gamma must be > 1");
    }
    if (!(delta >= 0.0 && delta < 1.0)) {
      throw ValidationError("delta must lie in [0, 1)");
    }
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
      throw ValidationError("epsilon must be > 0");
    }
    if (num_vertices == 0) throw ValidationError("num_vertices must be positive");
  }
};

// Lower end of class i, the value every weight in the class rounds down to.
inline double class_floor(ClassIndex i, double gamma, double delta) {
  return std::pow(gamma, static_cast<double>(i) + delta);
}

// The unique i with class_floor(i) <= w < class_floor(i + 1). The log estimate
// is corrected against class_floor itself so that membership is decided by the
// same arithmetic everywhere.
inline ClassIndex class_index(double w, double gamma, double delta) {
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw ValidationError("class_index needs a positive finite weight");
  }
  if (!(gamma > 1.0)) throw ValidationError("gamma must be > 1");
  if (!(delta >= 0.0 && delta < 1.0)) throw ValidationError("delta must lie in [0, 1)");
  auto i = static_cast<ClassIndex>(std::floor(std::log(w) / std::log(gamma) - delta));
  while (class_floor(i, gamma, delta) > w) --i;
  while (class_floor(i + 1, gamma, delta) <= w) ++i;
  return i;
}

// Inclusive range of class indices under consideration; empty before the
// first edge.
struct ClassWindow {
  ClassIndex lo = 0;
  ClassIndex hi = -1;

  bool empty() const { return lo > hi; }
  bool contains(ClassIndex i) const { return lo <= i && i <= hi; }
  std::size_t size() const { return empty() ? 0 : static_cast<std::size_t>(hi - lo + 1); }
};

class BucketState {
 public:
  explicit BucketState(BucketConfig config) : config_(config) { config_.validate(); }

  // Raises w_max (pruning first) before classifying e, then appends e to its
  // class matching when the class is in the window and both endpoints are
  // free there. Anything else is discarded for good.
  void process_edge(const Edge& e) {
    if (e.u >= config_.num_vertices || e.v >= config_.num_vertices) {
      throw ValidationError("vertex id out of range for num_vertices=" +
                            std::to_string(config_.num_vertices));
    }
    ++edges_processed_;
    if (e.weight > w_max_) {
      w_max_ = e.weight;
      prune_classes();
    }
    const ClassIndex i = class_index(e.weight, config_.gamma, config_.delta);
    if (!window_.contains(i)) return;
    ClassSlot& slot = slots_[static_cast<std::size_t>(i - window_.lo)];
    if (slot.covered.contains(e.u) || slot.covered.contains(e.v)) return;
    slot.edges.push_back(e);
    slot.covered.insert(e.u);
    slot.covered.insert(e.v);
    ++stored_edge_count_;
    stored_edge_peak_ = std::max(stored_edge_peak_, stored_edge_count_);
  }

  // Greedy maximal matching over the stored edges; linear in their number.
  Matching finalize() const {
    std::vector<Edge> order;
    order.reserve(stored_edge_count_);
    for (auto it = slots_.rbegin(); it != slots_.rend(); ++it) {
      order.insert(order.end(), it->edges.begin(), it->edges.end());
    }
    if (config_.greedy_order == GreedyOrder::by_weight) {
      std::stable_sort(order.begin(), order.end(),
                       [](const Edge& a, const Edge& b) { return a.weight > b.weight; });
    }
    std::unordered_set<VertexId> covered;
    covered.reserve(order.size() * 2);
    std::vector<Edge> picked;
    for (const Edge& e : order) {
      if (covered.contains(e.u) || covered.contains(e.v)) continue;
      covered.insert(e.u);
      covered.insert(e.v);
      picked.push_back(e);
    }
    return Matching(std::move(picked));
  }

  const BucketConfig& config() const { return config_; }
  double w_max() const { return w_max_; }
  ClassWindow class_window() const { return window_; }
  double discard_threshold() const {
    return 2.0 * config_.epsilon * w_max_ / static_cast<double>(config_.num_vertices);
  }
  std::size_t stored_edge_count() const { return stored_edge_count_; }
  std::size_t stored_edge_peak() const { return stored_edge_peak_; }
  std::size_t edges_processed() const { return edges_processed_; }

  // The class-i matching in insertion order; empty when i is outside the window.
  std::span<const Edge> class_matching(ClassIndex i) const {
    if (!window_.contains(i)) return {};
    return slots_[static_cast<std::size_t>(i - window_.lo)].edges;
  }

  // Classes currently holding at least one edge, highest first.
  std::vector<ClassIndex> stored_classes() const {
    std::vector<ClassIndex> out;
    for (ClassIndex i = window_.hi; i >= window_.lo && !window_.empty(); --i) {
      if (!class_matching(i).empty()) out.push_back(i);
    }
    return out;
  }

  bool stores(const Edge& e) const {
    const auto m = class_matching(class_index(e.weight, config_.gamma, config_.delta));
    return std::any_of(m.begin(), m.end(),
                       [&](const Edge& f) { return edge_key(f) == edge_key(e); });
  }

 private:
  struct ClassSlot {
    std::vector<Edge> edges;
    std::unordered_set<VertexId> covered;
  };

  // Recomputes the window for the current w_max and drops every class that
  // fell below the discard threshold. Windows only move upwards, so a pruned
  // class never comes back.
  void prune_classes() {
    const ClassIndex hi = class_index(w_max_, config_.gamma, config_.delta);
    // A huge epsilon pushes the threshold above w_max; keep the top class.
    const ClassIndex lo = std::min(
        hi, class_index(discard_threshold(), config_.gamma, config_.delta));
    if (window_.empty() || lo > window_.hi) {
      for (const ClassSlot& s : slots_) stored_edge_count_ -= s.edges.size();
      slots_.clear();
      slots_.resize(static_cast<std::size_t>(hi - lo + 1));
    } else {
      for (ClassIndex i = window_.lo; i < lo; ++i) {
        stored_edge_count_ -= slots_.front().edges.size();
        slots_.pop_front();
      }
      slots_.resize(static_cast<std::size_t>(hi - lo + 1));
    }
    window_ = ClassWindow{lo, hi};
  }

  BucketConfig config_;
  double w_max_ = 0.0;
  ClassWindow window_;
  std::deque<ClassSlot> slots_;  // slots_[k] is class window_.lo + k
  std::size_t stored_edge_count_ = 0;
  std::size_t stored_edge_peak_ = 0;
  std::size_t edges_processed_ = 0;
};

template <EdgeSource Source>
BucketState stream_into(const BucketConfig& config, Source& source) {
  BucketState state(config);
  while (auto e = source.next()) state.process_edge(*e);
  return state;
}

inline BucketState stream_into(const BucketConfig& config, const StreamSource& stream) {
  EdgeReader reader(stream);
  return stream_into(config, reader);
}

inline Matching run_shifted(const StreamSource& stream, double gamma, double epsilon,
                            double delta) {
  BucketConfig config{gamma, delta, epsilon, std::max<std::size_t>(stream.num_vertices(), 1)};
  return stream_into(config, stream).finalize();
}

inline Matching run_deterministic(const StreamSource& stream, double gamma,
                                  double epsilon) {
  return run_shifted(stream, gamma, epsilon, 0.0);
}

// Smallest q with gamma^(1/q) <= 1 + epsilon/5.
inline int choose_q(double gamma, double epsilon) {
  if (!(gamma > 1.0)) throw ValidationError("gamma must be > 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ValidationError("choose_q needs 0 < epsilon < 1");
  }
  const double target = 1.0 + epsilon / 5.0;
  auto fits = [&](long long q) { return std::pow(gamma, 1.0 / static_cast<double>(q)) <= target; };
  long long q = std::max(1LL, static_cast<long long>(std::ceil(std::log(gamma) / std::log1p(epsilon / 5.0))));
  while (q > 1 && fits(q - 1)) --q;
  while (!fits(q)) ++q;
  if (q > std::numeric_limits<int>::max()) throw ValidationError("q overflows");
  return static_cast<int>(q);
}

// Mean of the class-floor rounding of w when delta is uniform on [0, 1).
inline double expected_rounded_weight(double w, double gamma) {
  if (!(w > 0.0)) throw ValidationError("weight must be positive");
  if (!(gamma > 1.0)) throw ValidationError("gamma must be > 1");
  return w * (1.0 - 1.0 / gamma) / std::log(gamma);
}

enum class Execution { sequential, parallel };

struct EnsembleResult {
  Matching best;
  std::size_t best_copy = 0;
  std::vector<Matching> per_copy;
  std::vector<BucketState> copies;  // final states, copy t has delta = t/q

  int q() const { return static_cast<int>(copies.size()); }
  double delta_of(std::size_t copy) const { return copies.at(copy).config().delta; }
};

// Feeds every edge of one pass over `source` to q shifted copies. In parallel
// mode the edges are buffered in chunks and each copy consumes the chunk on
// its own task; the per-copy edge order is identical in both modes.
template <EdgeSource Source>
EnsembleResult run_ensemble(Source& source, std::size_t num_vertices, double gamma,
                            double epsilon, int q,
                            Execution execution = Execution::sequential) {
  if (q < 1) throw ValidationError("q must be >= 1");
  EnsembleResult result;
  result.copies.reserve(static_cast<std::size_t>(q));
  for (int t = 0; t < q; ++t) {
    BucketConfig config{gamma, static_cast<double>(t) / q, epsilon,
                        std::max<std::size_t>(num_vertices, 1)};
    result.copies.emplace_back(config);
  }

  if (execution == Execution::sequential) {
    while (auto e = source.next()) {
      for (BucketState& copy : result.copies) copy.process_edge(*e);
    }
  } else {
    constexpr std::size_t kChunk = 8192;
    std::vector<Edge> chunk;
    chunk.reserve(kChunk);
    bool more = true;
    while (more) {
      chunk.clear();
      while (chunk.size() < kChunk) {
        auto e = source.next();
        if (!e) {
          more = false;
          break;
        }
        chunk.push_back(*e);
      }
      if (chunk.empty()) break;
      std::vector<std::future<void>> tasks;
      tasks.reserve(result.copies.size());
      for (BucketState& copy : result.copies) {
        tasks.push_back(std::async(std::launch::async, [&copy, &chunk] {
          for (const Edge& e : chunk) copy.process_edge(e);
        }));
      }
      for (auto& t : tasks) t.get();
    }
  }

  result.per_copy.reserve(result.copies.size());
  for (const BucketState& copy : result.copies) result.per_copy.push_back(copy.finalize());
  for (std::size_t t = 1; t < result.per_copy.size(); ++t) {
    if (result.per_copy[t].weight() > result.per_copy[result.best_copy].weight()) {
      result.best_copy = t;
    }
  }
  result.best = result.per_copy[result.best_copy];
  return result;
}

inline EnsembleResult run_ensemble(const StreamSource& stream, double gamma, double epsilon,
                                   int q, Execution execution = Execution::sequential) {
  EdgeReader reader(stream);
  return run_ensemble(reader, stream.num_vertices(), gamma, epsilon, q, execution);
}

}  // namespace ssmatch
