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

// Post-hoc numerical certificate for one finished bucket run.
//
// Vertices are associated top-down: a vertex belongs to the highest stored
// class whose matching covers it and carries that class's floor as its
// associated weight. With OPT the oracle optimum over the edges above the
// final discard threshold and OPT' its class-floor rounding, a run is
// certified when
//
//   OPT' <= OPT <= gamma * OPT'
//   OPT' <= TW
//   TW   <= 2*gamma/(gamma-1) * w(M)
//
// where TW is the total associated weight and M the finalized matching.

#pragma once

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <span>
#include <vector>

#include "ssmatch/bucket_matcher.hpp"
#include "ssmatch/error.hpp"
#include "ssmatch/graph.hpp"
#include "ssmatch/ratio_bounds.hpp"

namespace ssmatch {

struct VertexAssociation {
  ClassIndex class_index = 0;
  double weight = 0.0;
};

// a <= b up to `slack` relative to the larger magnitude.
inline bool leq_with_slack(double a, double b, double slack) {
  return a <= b + slack * std::max({std::abs(a), std::abs(b), 1e-300});
}

struct AnalysisCertificate {
  double gamma = 0.0;
  double delta = 0.0;
  double alg_weight = 0.0;
  double opt_weight = 0.0;
  double opt_rounded = 0.0;
  double total_associated_weight = 0.0;
  std::map<VertexId, VertexAssociation> per_vertex_association;

  bool rounding_holds(double slack = 1e-9) const {
    return leq_with_slack(opt_rounded, opt_weight, slack) &&
           leq_with_slack(opt_weight, gamma * opt_rounded, slack);
  }
  bool association_covers_opt(double slack = 1e-9) const {
    return leq_with_slack(opt_rounded, total_associated_weight, slack);
  }
  bool charging_holds(double slack = 1e-9) const {
    return leq_with_slack(total_associated_weight, charging_factor(gamma) * alg_weight, slack);
  }
  bool chain_holds(double slack = 1e-9) const {
    return rounding_holds(slack) && association_covers_opt(slack) && charging_holds(slack);
  }
  // OPT / w(M) as certified by the chain: gamma * TW / w(M).
  double certified_ratio() const {
    return alg_weight > 0.0 ? gamma * total_associated_weight / alg_weight : 0.0;
  }
};

// Edges strictly above the state's final discard threshold; the oracle input
// build_certificate expects.
inline std::vector<Edge> edges_above_threshold(std::span<const Edge> edges,
                                               const BucketState& state) {
  const double threshold = state.discard_threshold();
  std::vector<Edge> out;
  std::copy_if(edges.begin(), edges.end(), std::back_inserter(out),
               [&](const Edge& e) { return e.weight > threshold; });
  return out;
}

inline AnalysisCertificate build_certificate(const BucketState& state,
                                             const Matching& oracle_matching) {
  const BucketConfig& config = state.config();
  const double threshold = state.discard_threshold();
  for (const Edge& e : oracle_matching.edges()) {
    if (!(e.weight > threshold)) {
      throw ValidationError("oracle matching contains an edge at or below the "
                            "discard threshold; filter with edges_above_threshold");
    }
  }

  AnalysisCertificate cert;
  cert.gamma = config.gamma;
  cert.delta = config.delta;
  cert.alg_weight = state.finalize().weight();
  cert.opt_weight = oracle_matching.weight();

  std::vector<Edge> rounded;
  rounded.reserve(oracle_matching.size());
  for (const Edge& e : oracle_matching.edges()) {
    const ClassIndex i = class_index(e.weight, config.gamma, config.delta);
    rounded.push_back(Edge{e.u, e.v, class_floor(i, config.gamma, config.delta)});
  }
  cert.opt_rounded = matching_weight(rounded);

  CompensatedSum associated;
  for (ClassIndex i : state.stored_classes()) {
    const double floor_i = class_floor(i, config.gamma, config.delta);
    for (const Edge& e : state.class_matching(i)) {
      for (VertexId x : {e.u, e.v}) {
        if (cert.per_vertex_association.emplace(x, VertexAssociation{i, floor_i}).second) {
          associated.add(floor_i);
        }
      }
    }
  }
  cert.total_associated_weight = associated.value();
  return cert;
}

}  // namespace ssmatch
