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

// Test-only generators and reference computations. Nothing here calls into
// the code it is used to check.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "ssmatch/bucket_matcher.hpp"
#include "ssmatch/graph.hpp"

namespace ssmatch::testing {

// Random simple graph; weights drawn by `weight`.
inline std::vector<Edge> random_edges(std::mt19937_64& rng, std::size_t n, std::size_t m,
                                      const std::function<double(std::mt19937_64&)>& weight) {
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);
  pairs.resize(std::min(m, pairs.size()));
  std::vector<Edge> edges;
  for (auto [u, v] : pairs) {
    if (rng() & 1) std::swap(u, v);
    edges.push_back(Edge{u, v, weight(rng)});
  }
  return edges;
}

inline double uniform_weight(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.5, 100.0)(rng);
}

inline double integer_weight(std::mt19937_64& rng) {
  return static_cast<double>(std::uniform_int_distribution<int>(1, 50)(rng));
}

// Spread over many powers of two, so that many classes are in play.
inline double wide_weight(std::mt19937_64& rng) {
  return std::exp2(std::uniform_real_distribution<double>(-6.0, 14.0)(rng));
}

// Exact maximum matching weight by recursion on the lowest unmatched vertex:
// either it stays single or it is matched along one of its edges. Memoised
// on the set of used vertices; fine for n <= 20.
inline double reference_max_matching(const std::vector<Edge>& edges) {
  std::map<VertexId, unsigned> local;
  for (const Edge& e : edges) {
    local.emplace(e.u, 0);
    local.emplace(e.v, 0);
  }
  unsigned next = 0;
  for (auto& [x, id] : local) id = next++;
  const unsigned n = next;
  std::vector<std::vector<std::pair<unsigned, double>>> adj(n);
  for (const Edge& e : edges) {
    adj[local[e.u]].push_back({local[e.v], e.weight});
    adj[local[e.v]].push_back({local[e.u], e.weight});
  }
  std::map<std::uint32_t, double> memo;
  std::function<double(std::uint32_t)> best = [&](std::uint32_t used) -> double {
    unsigned x = 0;
    while (x < n && (used >> x & 1u)) ++x;
    if (x >= n) return 0.0;
    if (auto it = memo.find(used); it != memo.end()) return it->second;
    double b = best(used | (1u << x));
    for (auto [y, w] : adj[x]) {
      if (!(used >> y & 1u)) b = std::max(b, w + best(used | (1u << x) | (1u << y)));
    }
    memo[used] = b;
    return b;
  };
  return best(0);
}

// Class of w found by walking powers directly, without logarithms.
inline std::int64_t reference_class(double w, double gamma, double delta) {
  std::int64_t i = 0;
  while (std::pow(gamma, static_cast<double>(i) + delta) > w) --i;
  while (std::pow(gamma, static_cast<double>(i + 1) + delta) <= w) ++i;
  return i;
}

// Midpoint Riemann sum over delta in [0, 1) of the rounded-down weight.
inline double riemann_rounded_weight(double w, double gamma, std::size_t points) {
  double sum = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double delta = (static_cast<double>(k) + 0.5) / static_cast<double>(points);
    const double lg = std::log(w) / std::log(gamma) - delta;
    sum += std::pow(gamma, std::floor(lg) + delta);
  }
  return sum / static_cast<double>(points);
}

// S_j = alpha x1^j + beta x2^j with alpha = 1/(x1 - x2), evaluated in complex
// arithmetic straight from the characteristic roots.
inline double complex_closed_form_S(double C, std::size_t j) {
  const std::complex<double> a(2.0 * C + 1.0, 0.0);
  const std::complex<double> b(-(C * C + 2.0 * C + 2.0), 0.0);
  const std::complex<double> c(C * C + C + 1.0, 0.0);
  const std::complex<double> root = std::sqrt(b * b - 4.0 * a * c);
  const std::complex<double> x1 = (-b + root) / (2.0 * a);
  const std::complex<double> x2 = (-b - root) / (2.0 * a);
  const std::complex<double> alpha = 1.0 / (x1 - x2);
  const double jd = static_cast<double>(j);
  return (alpha * std::pow(x1, jd) - alpha * std::pow(x2, jd)).real();
}

// Replays `stream` with unlimited memory and reports the first stream edge
// that violates per-class maximality of the final state: an edge of a class
// in the final window that is neither stored nor blocked by a stored edge of
// the same class.
inline std::optional<Edge> maximality_violation(const BucketState& state,
                                                std::span<const Edge> stream) {
  const BucketConfig& cfg = state.config();
  for (const Edge& e : stream) {
    const ClassIndex i = class_index(e.weight, cfg.gamma, cfg.delta);
    if (!state.class_window().contains(i)) continue;
    bool ok = false;
    for (const Edge& f : state.class_matching(i)) {
      if (edge_key(f) == edge_key(e) || shares_vertex(e, f)) {
        ok = true;
        break;
      }
    }
    if (!ok) return e;
  }
  return std::nullopt;
}

inline double memory_bound(std::size_t n, double gamma, double epsilon) {
  const double nd = static_cast<double>(n);
  return nd / 2.0 * (std::ceil(std::log(nd / (2.0 * epsilon)) / std::log(gamma)) + 2.0);
}

}  // namespace ssmatch::testing
