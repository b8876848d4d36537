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

// Exact maximum-weight matching for desk-sized graphs.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "ssmatch/error.hpp"
#include "ssmatch/graph.hpp"

namespace ssmatch {

struct OracleLimit {
  std::size_t max_vertices = 20;
  std::size_t max_edges = 64;
};

struct OracleResult {
  Matching matching;
  double weight = 0.0;
};

namespace detail {

// Endpoints remapped to bit positions, counting only vertices that occur.
struct LocalGraph {
  std::vector<std::uint64_t> masks;  // per edge, bits of its two endpoints
  std::size_t vertex_count = 0;
};

inline LocalGraph to_local(std::span<const Edge> edges, std::size_t max_vertices) {
  std::map<VertexId, unsigned> local;
  LocalGraph g;
  g.masks.reserve(edges.size());
  for (const Edge& e : edges) {
    std::uint64_t mask = 0;
    for (VertexId x : {e.u, e.v}) {
      auto [it, inserted] = local.emplace(x, static_cast<unsigned>(local.size()));
      if (local.size() > max_vertices) {
        throw InstanceTooLarge("exact oracle limited to " + std::to_string(max_vertices) +
                               " vertices");
      }
      mask |= std::uint64_t{1} << it->second;
    }
    g.masks.push_back(mask);
  }
  g.vertex_count = local.size();
  return g;
}

class MatchingSearch {
 public:
  MatchingSearch(std::vector<double> weights, std::vector<std::uint64_t> masks,
                 std::size_t vertex_count)
      : weights_(std::move(weights)), masks_(std::move(masks)), vertex_count_(vertex_count) {}

  std::vector<std::size_t> run() {
    descend(0, 0, 0.0, 0);
    return best_;
  }

 private:
  // Sum of the heaviest remaining edges that are individually still
  // placeable, capped at free_vertices / 2 of them. Edges are sorted by
  // decreasing weight, so this dominates any completion.
  double bound(std::size_t k, std::uint64_t covered, std::size_t free_vertices) const {
    double sum = 0.0;
    std::size_t budget = free_vertices / 2;
    for (std::size_t i = k; i < weights_.size() && budget > 0; ++i) {
      if ((masks_[i] & covered) == 0) {
        sum += weights_[i];
        --budget;
      }
    }
    return sum;
  }

  void descend(std::size_t k, std::uint64_t covered, double weight, std::size_t used) {
    if (weight > best_weight_) {
      best_weight_ = weight;
      best_ = chosen_;
    }
    if (k == weights_.size()) return;
    const std::size_t free_vertices = vertex_count_ - 2 * used;
    if ((weight + bound(k, covered, free_vertices)) * (1.0 + 1e-12) <= best_weight_) return;
    if ((masks_[k] & covered) == 0) {
      chosen_.push_back(k);
      descend(k + 1, covered | masks_[k], weight + weights_[k], used + 1);
      chosen_.pop_back();
    }
    descend(k + 1, covered, weight, used);
  }

  std::vector<double> weights_;
  std::vector<std::uint64_t> masks_;
  std::size_t vertex_count_;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> best_;
  double best_weight_ = 0.0;
};

}  // namespace detail

// Branch and bound over edges in decreasing weight (ties in lexicographic
// endpoint order), include-branch first. Deterministic for a given edge set.
inline OracleResult max_weight_matching_exact(std::span<const Edge> edges,
                                              OracleLimit limit = {}) {
  if (limit.max_vertices == 0 || limit.max_edges == 0) {
    throw ValidationError("oracle limits must be positive");
  }
  if (limit.max_vertices > 64) {
    throw ValidationError("oracle supports at most 64 vertices");
  }
  if (edges.size() > limit.max_edges) {
    throw InstanceTooLarge("exact oracle limited to " + std::to_string(limit.max_edges) +
                           " edges, got " + std::to_string(edges.size()));
  }
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  auto lex = [](const Edge& e) {
    return std::pair{std::min(e.u, e.v), std::max(e.u, e.v)};
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (edges[a].weight != edges[b].weight) return edges[a].weight > edges[b].weight;
    return lex(edges[a]) < lex(edges[b]);
  });
  std::vector<Edge> sorted;
  sorted.reserve(edges.size());
  for (std::size_t i : order) sorted.push_back(edges[i]);

  const detail::LocalGraph local = detail::to_local(sorted, limit.max_vertices);
  std::vector<double> weights;
  weights.reserve(sorted.size());
  for (const Edge& e : sorted) weights.push_back(e.weight);

  detail::MatchingSearch search(std::move(weights), local.masks, local.vertex_count);
  std::vector<Edge> picked;
  for (std::size_t i : search.run()) picked.push_back(sorted[i]);
  Matching m(std::move(picked));
  const double w = m.weight();
  return OracleResult{std::move(m), w};
}

// Enumerates all 2^m subsets; the independent cross-check for the search above.
inline double max_weight_matching_bruteforce(std::span<const Edge> edges) {
  constexpr std::size_t kMaxEdges = 16;
  if (edges.size() > kMaxEdges) {
    throw InstanceTooLarge("brute force limited to 16 edges");
  }
  const detail::LocalGraph local = detail::to_local(edges, 64);
  const std::size_t m = edges.size();
  const std::size_t subsets = std::size_t{1} << m;
  constexpr std::uint64_t kInvalid = ~std::uint64_t{0};
  // covered[s] is the vertex set of subset s, or kInvalid if s is no matching.
  std::vector<std::uint64_t> covered(subsets, 0);
  std::vector<double> weight(subsets, 0.0);
  double best = 0.0;
  for (std::size_t s = 1; s < subsets; ++s) {
    const std::size_t low = static_cast<std::size_t>(__builtin_ctzll(s));
    const std::size_t rest = s & (s - 1);
    if (covered[rest] == kInvalid || (covered[rest] & local.masks[low]) != 0) {
      covered[s] = kInvalid;
      continue;
    }
    covered[s] = covered[rest] | local.masks[low];
    weight[s] = weight[rest] + edges[low].weight;
    best = std::max(best, weight[s]);
  }
  return best;
}

}  // namespace ssmatch
