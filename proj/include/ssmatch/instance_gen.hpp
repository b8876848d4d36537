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

// Instance generators: the tight family for the deterministic bucket run,
// seeded random graphs, and seeded stream permutations.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "ssmatch/bucket_matcher.hpp"
#include "ssmatch/error.hpp"
#include "ssmatch/graph.hpp"

namespace ssmatch {

struct TightExampleConfig {
  double gamma = 2.0;
  int k = 1;
  double eps = 1e-6;

  void validate() const {
    if (!(gamma >= 2.0) || !std::isfinite(gamma)) throw ValidationError("gamma must be >= 2");
    if (k < 1) throw ValidationError("k must be positive");
    if (!(eps > 0.0 && eps < gamma - 1.0)) throw ValidationError("eps must lie in (0, gamma - 1)");
    if (k > 60) throw ValidationError("k too large");
  }
};

// Vertex layout: x = 0, y = 1, then alpha_i, beta_i, a_i, b_i for i < k, then
// a_k, b_k; 4k + 4 vertices in total.
//
// Edges, with the class each lands in at delta = 0:
//   (alpha_i, x), (y, beta_i)       gamma^i            class i
//   (alpha_i, a_i), (beta_i, b_i)   gamma^(i+1) - eps  class i
//   (x, y)                          gamma^k            class k
//   (a_k, x), (b_k, y)              gamma^(k+1) - eps  class k
//
// Emission order: for each i the two class-i light edges, then the two heavy
// class-i edges that conflict with them, i ascending; then (x, y), then the
// top pair. Every heavy edge therefore meets an occupied endpoint in its own
// class and is dropped, and the greedy pass returns {(x, y)} alone.
inline StreamSource tight_instance(const TightExampleConfig& config) {
  config.validate();
  const double g = config.gamma;
  const int k = config.k;
  const VertexId x = 0;
  const VertexId y = 1;
  auto alpha = [](int i) { return static_cast<VertexId>(2 + 4 * i); };
  auto beta = [](int i) { return static_cast<VertexId>(3 + 4 * i); };
  auto a = [](int i) { return static_cast<VertexId>(4 + 4 * i); };
  auto b = [](int i) { return static_cast<VertexId>(5 + 4 * i); };
  const VertexId a_k = static_cast<VertexId>(2 + 4 * k);
  const VertexId b_k = a_k + 1;

  auto in_class = [&](double w, int i) {
    if (class_index(w, g, 0.0) != i) {
      throw ValidationError("tight instance weight " + std::to_string(w) +
                            " does not fall in class " + std::to_string(i));
    }
    return w;
  };

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(4 * k + 3));
  for (int i = 0; i < k; ++i) {
    const double light = in_class(std::pow(g, i), i);
    const double heavy = in_class(std::pow(g, i + 1) - config.eps, i);
    edges.push_back(Edge{alpha(i), x, light});
    edges.push_back(Edge{y, beta(i), light});
    edges.push_back(Edge{alpha(i), a(i), heavy});
    edges.push_back(Edge{beta(i), b(i), heavy});
  }
  edges.push_back(Edge{x, y, in_class(std::pow(g, k), k)});
  const double top = in_class(std::pow(g, k + 1) - config.eps, k);
  edges.push_back(Edge{a_k, x, top});
  edges.push_back(Edge{b_k, y, top});
  return StreamSource(static_cast<std::size_t>(b_k) + 1, std::move(edges));
}

inline std::vector<std::string> tight_instance_labels(int k) {
  std::vector<std::string> labels{"x", "y"};
  for (int i = 0; i < k; ++i) {
    const std::string s = std::to_string(i);
    labels.insert(labels.end(), {"alpha" + s, "beta" + s, "a" + s, "b" + s});
  }
  labels.push_back("a" + std::to_string(k));
  labels.push_back("b" + std::to_string(k));
  return labels;
}

// Maximum matching weight on tight_instance: 2 * sum_{i=1}^{k+1} (gamma^i - eps).
inline double tight_instance_opt(const TightExampleConfig& config) {
  double total = 0.0;
  for (int i = 1; i <= config.k + 1; ++i) total += 2.0 * (std::pow(config.gamma, i) - config.eps);
  return total;
}

struct UniformLaw {
  double lo = 1.0;
  double hi = 100.0;
};

struct UniformIntLaw {
  std::int64_t lo = 1;
  std::int64_t hi = 100;
};

// gamma^(c + u) with c uniform in {0, ..., depth-1} and u uniform in [0, 1).
struct ExpClassesLaw {
  double gamma = 2.0;
  int depth = 10;
};

using WeightLaw = std::variant<UniformLaw, UniformIntLaw, ExpClassesLaw>;

struct RandomInstanceConfig {
  std::size_t n = 0;
  std::size_t m = 0;
  WeightLaw law = UniformLaw{};
  std::uint64_t seed = 0;

  void validate() const {
    const std::size_t pairs = n < 2 ? 0 : n * (n - 1) / 2;
    if (m > pairs) {
      throw ValidationError("m=" + std::to_string(m) + " exceeds n(n-1)/2=" + std::to_string(pairs));
    }
    if (n > std::numeric_limits<VertexId>::max()) throw ValidationError("n too large");
    std::visit(
        [](const auto& law) {
          using L = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<L, UniformLaw>) {
            if (!(law.lo > 0.0 && law.lo <= law.hi) || !std::isfinite(law.hi)) {
              throw ValidationError("uniform law needs 0 < lo <= hi");
            }
          } else if constexpr (std::is_same_v<L, UniformIntLaw>) {
            if (!(law.lo > 0 && law.lo <= law.hi)) {
              throw ValidationError("uniform-int law needs 0 < lo <= hi");
            }
          } else {
            if (!(law.gamma > 1.0) || law.depth < 1) {
              throw ValidationError("exp-classes law needs gamma > 1 and depth >= 1");
            }
          }
        },
        law);
  }
};

// "uniform:<lo>:<hi>", "uniform-int:<lo>:<hi>" or "exp-classes:<gamma>:<depth>".
inline WeightLaw parse_weight_law(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  auto bad = [&] { return ValidationError("malformed weight law '" + std::string(text) + "'"); };
  if (parts.size() != 3) throw bad();
  auto num = [&](std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw bad();
    return v;
  };
  auto integer = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw bad();
    return v;
  };
  if (parts[0] == "uniform") return UniformLaw{num(parts[1]), num(parts[2])};
  if (parts[0] == "uniform-int") return UniformIntLaw{integer(parts[1]), integer(parts[2])};
  if (parts[0] == "exp-classes") {
    return ExpClassesLaw{num(parts[1]), static_cast<int>(integer(parts[2]))};
  }
  throw bad();
}

inline std::string to_string(const WeightLaw& law) {
  return std::visit(
      [](const auto& l) -> std::string {
        using L = std::decay_t<decltype(l)>;
        auto fmt = [](double v) {
          char buf[32];
          auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
          return std::string(buf, ptr);
        };
        if constexpr (std::is_same_v<L, UniformLaw>) {
          return "uniform:" + fmt(l.lo) + ":" + fmt(l.hi);
        } else if constexpr (std::is_same_v<L, UniformIntLaw>) {
          return "uniform-int:" + std::to_string(l.lo) + ":" + std::to_string(l.hi);
        } else {
          return "exp-classes:" + fmt(l.gamma) + ":" + std::to_string(l.depth);
        }
      },
      law);
}

// Distinct endpoint pairs drawn by rejection when the graph is sparse and by a
// partial shuffle of all pairs when it is dense.
inline StreamSource random_instance(const RandomInstanceConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  const std::size_t n = config.n;
  std::vector<std::pair<VertexId, VertexId>> pairs;
  pairs.reserve(config.m);
  const std::size_t total = n < 2 ? 0 : n * (n - 1) / 2;
  if (config.m * 2 > total) {
    std::vector<std::pair<VertexId, VertexId>> all;
    all.reserve(total);
    for (VertexId u = 0; u < n; ++u) {
      for (VertexId v = u + 1; v < n; ++v) all.emplace_back(u, v);
    }
    for (std::size_t i = 0; i < config.m; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, all.size() - 1);
      std::swap(all[i], all[pick(rng)]);
      pairs.push_back(all[i]);
    }
  } else {
    std::uniform_int_distribution<VertexId> vertex(0, static_cast<VertexId>(n - 1));
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(config.m * 2);
    while (pairs.size() < config.m) {
      const VertexId u = vertex(rng);
      const VertexId v = vertex(rng);
      if (u == v || !seen.insert(edge_key(u, v)).second) continue;
      pairs.emplace_back(u, v);
    }
  }

  auto draw = [&]() -> double {
    return std::visit(
        [&](const auto& law) -> double {
          using L = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<L, UniformLaw>) {
            if (law.lo == law.hi) return law.lo;
            return std::uniform_real_distribution<double>(law.lo, law.hi)(rng);
          } else if constexpr (std::is_same_v<L, UniformIntLaw>) {
            return static_cast<double>(std::uniform_int_distribution<std::int64_t>(law.lo, law.hi)(rng));
          } else {
            const int c = std::uniform_int_distribution<int>(0, law.depth - 1)(rng);
            const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            return std::pow(law.gamma, c + u);
          }
        },
        config.law);
  };

  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [u, v] : pairs) edges.push_back(Edge{u, v, draw()});
  return StreamSource(std::max<std::size_t>(n, 1), std::move(edges));
}

inline StreamSource permute_stream(const StreamSource& stream, std::uint64_t seed) {
  std::vector<Edge> edges(stream.edges().begin(), stream.edges().end());
  std::mt19937_64 rng(seed);
  std::shuffle(edges.begin(), edges.end(), rng);
  return StreamSource(stream.num_vertices(), std::move(edges));
}

}  // namespace ssmatch
