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

// Edge, matching and edge-stream primitives shared by every other header.

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ssmatch/error.hpp"

namespace ssmatch {

using VertexId = std::uint32_t;

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Builds an edge, rejecting self-loops and non-positive or non-finite weights.
inline Edge make_edge(VertexId u, VertexId v, double weight) {
  if (u == v) {
    throw ValidationError("self-loop at vertex " + std::to_string(u));
  }
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw ValidationError("edge weight must be positive and finite");
  }
  return Edge{u, v, weight};
}

// Orientation-free identity of the endpoint pair.
inline std::uint64_t edge_key(VertexId u, VertexId v) {
  const auto lo = static_cast<std::uint64_t>(std::min(u, v));
  const auto hi = static_cast<std::uint64_t>(std::max(u, v));
  return (lo << 32) | hi;
}

inline std::uint64_t edge_key(const Edge& e) { return edge_key(e.u, e.v); }

inline bool touches(const Edge& e, VertexId x) { return e.u == x || e.v == x; }

inline bool shares_vertex(const Edge& a, const Edge& b) {
  return touches(b, a.u) || touches(b, a.v);
}

// Neumaier-compensated running sum; keeps cached weights insensitive to
// summation order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

inline double compensated_weight_sum(std::span<const Edge> edges) {
  CompensatedSum sum;
  for (const Edge& e : edges) sum.add(e.weight);
  return sum.value();
}

struct MatchingConflict {
  std::size_t first = 0;   // index of the earlier edge
  std::size_t second = 0;  // index of the edge that collides with it
  VertexId vertex = 0;
};

struct MatchingReport {
  std::optional<MatchingConflict> conflict;

  bool ok() const { return !conflict.has_value(); }
};

inline MatchingReport validate_matching(std::span<const Edge> edges) {
  std::unordered_map<VertexId, std::size_t> owner;
  owner.reserve(edges.size() * 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (VertexId x : {edges[i].u, edges[i].v}) {
      auto [it, inserted] = owner.emplace(x, i);
      if (!inserted) {
        return MatchingReport{MatchingConflict{it->second, i, x}};
      }
    }
  }
  return MatchingReport{};
}

inline double matching_weight(std::span<const Edge> edges) {
  return compensated_weight_sum(edges);
}

// An immutable set of vertex-disjoint edges with its cached total weight.
class Matching {
 public:
  Matching() = default;

  explicit Matching(std::vector<Edge> edges) : edges_(std::move(edges)) {
    const MatchingReport report = validate_matching(edges_);
    if (!report.ok()) {
      throw ValidationError("not a matching: vertex " +
                            std::to_string(report.conflict->vertex) +
                            " is covered twice");
    }
    weight_ = matching_weight(edges_);
  }

  const std::vector<Edge>& edges() const { return edges_; }
  double weight() const { return weight_; }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }

  bool contains(const Edge& e) const {
    return std::any_of(edges_.begin(), edges_.end(), [&](const Edge& f) {
      return edge_key(f) == edge_key(e);
    });
  }

 private:
  std::vector<Edge> edges_;
  double weight_ = 0.0;
};

inline double matching_weight(const Matching& m) { return m.weight(); }

// A declared vertex count plus the edge sequence in arrival order.
class StreamSource {
 public:
  StreamSource() = default;

  StreamSource(std::size_t num_vertices, std::vector<Edge> edges)
      : num_vertices_(num_vertices), edges_(std::move(edges)) {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges_.size());
    for (const Edge& e : edges_) {
      if (e.u >= num_vertices_ || e.v >= num_vertices_) {
        throw ValidationError("vertex id out of range [0, " +
                              std::to_string(num_vertices_) + ")");
      }
      make_edge(e.u, e.v, e.weight);
      if (!seen.insert(edge_key(e)).second) {
        throw ValidationError("duplicate edge (" + std::to_string(e.u) + ", " +
                              std::to_string(e.v) + ")");
      }
    }
  }

  std::size_t num_vertices() const { return num_vertices_; }
  std::span<const Edge> edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }

 private:
  std::size_t num_vertices_ = 0;
  std::vector<Edge> edges_;
};

// Anything that hands out edges one at a time and is exhausted afterwards.
template <typename S>
concept EdgeSource = requires(S s) {
  { s.next() } -> std::same_as<std::optional<Edge>>;
};

// Single-pass cursor over a StreamSource; counts every edge it delivers.
class EdgeReader {
 public:
  explicit EdgeReader(const StreamSource& source) : edges_(source.edges()) {}

  std::optional<Edge> next() {
    if (position_ == edges_.size()) return std::nullopt;
    ++reads_;
    return edges_[position_++];
  }

  std::size_t reads() const { return reads_; }
  bool exhausted() const { return position_ == edges_.size(); }

 private:
  std::span<const Edge> edges_;
  std::size_t position_ = 0;
  std::size_t reads_ = 0;
};

}  // namespace ssmatch
