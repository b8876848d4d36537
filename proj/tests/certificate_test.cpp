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

#include "ssmatch/certificate.hpp"

#include <gtest/gtest.h>

#include <random>

#include "ssmatch/exact_oracle.hpp"
#include "ssmatch/instance_gen.hpp"
#include "test_support.hpp"

namespace ssmatch {
namespace {

AnalysisCertificate certify(const StreamSource& s, double gamma, double delta, double eps) {
  const BucketState state =
      stream_into(BucketConfig{gamma, delta, eps, std::max<std::size_t>(s.num_vertices(), 1)}, s);
  const auto above = edges_above_threshold(s.edges(), state);
  return build_certificate(state, max_weight_matching_exact(above).matching);
}

TEST(Certificate, SingleEdge) {
  const StreamSource s(2, {{0, 1, 3.0}});
  const AnalysisCertificate c = certify(s, 2.0, 0.0, 0.1);
  EXPECT_EQ(c.per_vertex_association.size(), 2u);
  EXPECT_EQ(c.total_associated_weight, 4.0);  // two vertices at floor 2
  EXPECT_EQ(c.opt_rounded, 2.0);
  EXPECT_EQ(c.opt_weight, 3.0);
  EXPECT_TRUE(c.chain_holds());
}

TEST(Certificate, HigherClassClaimsSharedVertex) {
  // vertex 1 is in M_3 and M_1; it is charged to class 3 only
  const StreamSource s(4, {{1, 2, 2.5}, {0, 1, 9.0}});
  const AnalysisCertificate c = certify(s, 2.0, 0.0, 0.01);
  EXPECT_EQ(c.per_vertex_association.at(1).class_index, 3);
  EXPECT_EQ(c.per_vertex_association.at(2).class_index, 1);
  EXPECT_EQ(c.total_associated_weight, 8.0 + 8.0 + 2.0);
  EXPECT_TRUE(c.chain_holds());
}

TEST(Certificate, TightInstanceIsNearlyTight) {
  const double gamma = 2.0;
  for (int k : {1, 2, 3}) {
    const StreamSource s = tight_instance(TightExampleConfig{gamma, k, 1e-6});
    const AnalysisCertificate c = certify(s, gamma, 0.0, 0.001);
    EXPECT_TRUE(c.chain_holds());
    // gamma * TW / (bound * w(M)) = 1 - gamma^-(k+1)
    const double last = gamma * c.total_associated_weight /
                        (deterministic_ratio_bound(gamma) * c.alg_weight);
    EXPECT_NEAR(last, 1.0 - std::pow(gamma, -(k + 1)), 1e-12);
  }
  const StreamSource s = tight_instance(TightExampleConfig{gamma, 2, 1e-6});
  const AnalysisCertificate c = certify(s, gamma, 0.0, 0.001);
  EXPECT_NEAR(c.opt_weight, 27.999994, 1e-9);
  EXPECT_EQ(c.alg_weight, 4.0);
}

TEST(Certificate, RejectsEdgesBelowThreshold) {
  const StreamSource s(4, {{0, 1, 0.01}, {2, 3, 100.0}});
  const BucketState state = stream_into(BucketConfig{2.0, 0.0, 0.5, 4}, s);
  EXPECT_THROW(build_certificate(state, Matching({{0, 1, 0.01}, {2, 3, 100.0}})), ValidationError);
}

// Property: the chain holds on random oracle-sized instances for any shift.
TEST(CertificateProperty, ChainHolds) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 600; ++trial) {
    const std::size_t n = 2 + rng() % 13;
    const auto weight = trial % 2 ? testing::wide_weight : testing::uniform_weight;
    const StreamSource s(n, testing::random_edges(rng, n, rng() % 40, weight));
    const double gamma = std::uniform_real_distribution<double>(1.3, 5.0)(rng);
    const double delta = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double eps = std::uniform_real_distribution<double>(0.01, 0.5)(rng);
    const AnalysisCertificate c = certify(s, gamma, delta, eps);
    ASSERT_TRUE(c.rounding_holds()) << trial;
    ASSERT_TRUE(c.association_covers_opt()) << trial;
    ASSERT_TRUE(c.charging_holds()) << trial;
    ASSERT_LE(c.alg_weight, max_weight_matching_exact(s.edges()).weight * (1 + 1e-12));
  }
}

}  // namespace
}  // namespace ssmatch
