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

#include "ssmatch/sequences.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace ssmatch {
namespace {

// Prefix sums from the second-order recurrence, continued past the table.
std::vector<double> recurrence_S(double C, std::size_t upto) {
  const double a = (C * C + 2.0 * C + 2.0) / (2.0 * C + 1.0);
  const double b = (C * C + C + 1.0) / (2.0 * C + 1.0);
  std::vector<double> S{0.0, 1.0};
  while (S.size() <= upto) S.push_back(a * S[S.size() - 1] - b * S[S.size() - 2]);
  return S;
}

TEST(SolveR, RootOfCubic) {
  const double R = solve_R();
  EXPECT_GT(R, 4.96);
  EXPECT_LT(R, 4.97);
  EXPECT_LT(std::abs(lower_bound_cubic(R)), 1e-9);
  EXPECT_NEAR(R, 4.967365141396024, 1e-12);
}

TEST(GenerateSequences, FirstTermsAtC49) {
  const SequenceTable t = generate_sequences(4.9);
  EXPECT_EQ(t.w(1), 1.0);
  EXPECT_NEAR(t.w(2), 25.01 / 10.8, 1e-12);
  EXPECT_NEAR(t.w(2), 2.31574, 1e-5);
  EXPECT_NEAR(t.w_prime(2), 2.58426, 1e-5);
  EXPECT_NEAR(t.S(2), 3.31574, 1e-5);
  EXPECT_NEAR(t.S(2), (4.9 * 4.9 + 2 * 4.9 + 2) / (2 * 4.9 + 1), 1e-12);
  EXPECT_NEAR(t.w_prime(2) + t.w(2) + t.S(0), 4.9 * t.w(1), 1e-12);
  EXPECT_EQ(t.n(), 35u);
}

TEST(GenerateSequences, StoppingRule) {
  for (double C : {1.5, 2.0, 3.0, 4.0, 4.5, 4.9, 4.95}) {
    const SequenceTable t = generate_sequences(C);
    const std::size_t n = t.n();
    ASSERT_GE(n, 3u);
    for (std::size_t i = 2; i + 1 < n; ++i) EXPECT_GE(t.w(i), t.w(i - 1)) << C << ' ' << i;
    EXPECT_LT(t.w(n - 1), t.w(n - 2)) << C;
    EXPECT_GT(t.w(n - 1), 0.0);
    EXPECT_GE(t.S(n - 1) / t.w(n - 1), C) << C;
    for (std::size_t i = 2; i + 1 <= n; ++i) {
      EXPECT_NEAR(t.w_prime(i), ((C + 1) * t.w(i) - t.w(i - 1)) / C, 1e-12 * std::abs(t.w(i)) + 1e-300);
    }
    EXPECT_THROW(t.w_prime(n), ValidationError);
    EXPECT_THROW(t.w(0), ValidationError);
    EXPECT_THROW(t.S(n + 1), ValidationError);
  }
}

TEST(GenerateSequences, LengthGrowsTowardR) {
  EXPECT_GE(generate_sequences(4.95).n(), generate_sequences(4.5).n());
  EXPECT_EQ(generate_sequences(3.0).n(), 5u);
  EXPECT_EQ(generate_sequences(4.0).n(), 8u);
  EXPECT_EQ(generate_sequences(4.5).n(), 12u);
  EXPECT_EQ(generate_sequences(4.95).n(), 70u);
}

TEST(GenerateSequences, RejectsOutOfRangeC) {
  EXPECT_THROW(generate_sequences(1.0), ValidationError);
  EXPECT_THROW(generate_sequences(5.1), ValidationError);
  EXPECT_THROW(generate_sequences(solve_R()), ValidationError);
  EXPECT_THROW(generate_sequences(4.9, 10), ValidationError);
}

TEST(VerifyIdentities, HoldAtC49) {
  const SequenceTable t = generate_sequences(4.9);
  const IdentityReport r = verify_identities(t, 4.9);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.checked, (t.n() - 2) + (t.n() - 3));
  EXPECT_NEAR(t.S(0) + t.w(2) + t.w(3) + t.w_prime(3), 4.9 * t.w_prime(2), 1e-12);
}

TEST(VerifyIdentities, ReportsFirstFailure) {
  const SequenceTable good = generate_sequences(4.0);
  std::vector<double> w = good.w_values();
  w[3] *= 1.01;
  const SequenceTable bad(4.0, w, good.w_prime_values());
  const IdentityReport r = verify_identities(bad, 4.0);
  EXPECT_FALSE(r.ok);
  ASSERT_TRUE(r.first_failing_index);
  EXPECT_EQ(*r.first_failing_index, 3u);
  EXPECT_EQ(r.failing_identity, 1);
}

TEST(ClosedForm, BoundaryValues) {
  const ClosedFormParams p = make_closed_form(4.9);
  EXPECT_EQ(closed_form_S(p, 0), 0.0);
  EXPECT_NEAR(closed_form_S(p, 1), 1.0, 1e-9);
  EXPECT_NEAR(std::abs(p.x1), std::abs(p.x2), 1e-15);
  EXPECT_GT(p.theta, 0.0);
  EXPECT_LT(p.theta, std::numbers::pi);
}

TEST(ClosedForm, MatchesIndependentComplexEvaluation) {
  for (double C : {2.0, 3.0, 4.9}) {
    const ClosedFormParams p = make_closed_form(C);
    for (std::size_t j = 0; j <= 50; ++j) {
      const double scale = closed_form_envelope(p, j);
      ASSERT_NEAR(closed_form_S(p, j), testing::complex_closed_form_S(C, j), 1e-9 * scale);
    }
  }
}

// Property over a C grid: termination, identities, closed form against the
// prefix sums, and the index of the first sign change.
TEST(SequenceProperty, GridOverC) {
  const double R = solve_R();
  for (double C = 2.0; C < R - 1e-3; C += 0.01) {
    const SequenceTable t = generate_sequences(C);
    const IdentityReport r = verify_identities(t, C);
    ASSERT_TRUE(r.ok) << C << " max err " << r.max_relative_error;
    const ClosedFormParams p = make_closed_form(C);
    const std::size_t upto = std::max<std::size_t>(t.n(), 50);
    const std::vector<double> S = recurrence_S(C, upto);
    for (std::size_t j = 0; j <= t.n(); ++j) {
      ASSERT_NEAR(t.S(j), S[j], 1e-12 * std::max(1.0, closed_form_envelope(p, j)));
    }
    for (std::size_t j = 0; j <= upto; ++j) {
      const double scale = std::max(std::abs(S[j]), closed_form_envelope(p, j));
      ASSERT_LE(std::abs(closed_form_S(p, j) - S[j]), 1e-9 * scale) << C << ' ' << j;
    }
    ASSERT_EQ(first_nonpositive_S_by_recurrence(C), first_nonpositive_S_by_closed_form(p)) << C;
  }
}

}  // namespace
}  // namespace ssmatch
