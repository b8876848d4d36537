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

// Weight sequences driving the adversary for preemptive algorithms.
//
// For a target ratio C the main sequence is
//
//   w_1 = 1,   w_{k+1} = ((C^2 + 1) w_k - C S_{k-1}) / (2C + 1)
//
// with prefix sums S_k, and the escape weights are
//
//   w'_{k+1} = ((C + 1) w_{k+1} - w_k) / C.
//
// The main sequence stops one term after its first decrease. For C below the
// real root R of x^3 = 4(x^2 + x + 1) the prefix sums have the closed form
// S_j = -2 A r^j sin(j theta), which oscillates, so the sequence is finite.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ssmatch/error.hpp"

namespace ssmatch {

inline double lower_bound_cubic(double x) { return x * x * x - 4.0 * x * x - 4.0 * x - 4.0; }

// The unique real root of x^3 - 4x^2 - 4x - 4, by bisection on [4, 6] and a
// Newton polish.
inline double solve_R() {
  double lo = 4.0;
  double hi = 6.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (lower_bound_cubic(mid) < 0.0 ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 3; ++i) {
    const double slope = 3.0 * x * x - 8.0 * x - 4.0;
    x -= lower_bound_cubic(x) / slope;
  }
  return x;
}

inline void check_target_ratio(double C) {
  if (!(C > 1.0) || !(C < solve_R() - 1e-9)) {
    throw ValidationError("target ratio C must satisfy 1 < C < R (R ~ 4.9674)");
  }
}

// Indices follow the construction: w(1..n), w_prime(2..n-1), S(0..n).
class SequenceTable {
 public:
  SequenceTable(double C, std::vector<double> w, std::vector<double> w_prime)
      : C_(C), w_(std::move(w)), w_prime_(std::move(w_prime)) {
    S_.assign(w_.size() + 1, 0.0);
    for (std::size_t i = 0; i < w_.size(); ++i) S_[i + 1] = S_[i] + w_[i];
  }

  double C() const { return C_; }
  std::size_t n() const { return w_.size(); }

  double w(std::size_t i) const {
    if (i < 1 || i > n()) throw ValidationError("w index out of range");
    return w_[i - 1];
  }
  double w_prime(std::size_t i) const {
    if (i < 2 || i + 1 > n()) throw ValidationError("w' index out of range");
    return w_prime_[i - 2];
  }
  double S(std::size_t i) const {
    if (i > n()) throw ValidationError("S index out of range");
    return S_[i];
  }

  const std::vector<double>& w_values() const { return w_; }
  const std::vector<double>& w_prime_values() const { return w_prime_; }
  const std::vector<double>& S_values() const { return S_; }

 private:
  double C_;
  std::vector<double> w_;
  std::vector<double> w_prime_;
  std::vector<double> S_;
};

inline SequenceTable generate_sequences(double C, std::size_t max_steps = 1'000'000) {
  check_target_ratio(C);
  std::vector<double> w{1.0};
  double S_prev = 0.0;  // S_{k-1}
  auto next_term = [&] {
    const double wk = w.back();
    const double w_next = ((C * C + 1.0) * wk - C * S_prev) / (2.0 * C + 1.0);
    S_prev += wk;
    w.push_back(w_next);
  };
  while (true) {
    if (w.size() >= max_steps) {
      throw ValidationError("sequence exceeded max_steps=" + std::to_string(max_steps));
    }
    next_term();
    const std::size_t k = w.size();
    if (w[k - 1] < w[k - 2]) {
      if (k + 1 > max_steps) {
        throw ValidationError("sequence exceeded max_steps=" + std::to_string(max_steps));
      }
      next_term();
      break;
    }
  }
  const std::size_t n = w.size();
  std::vector<double> w_prime;
  for (std::size_t i = 2; i + 1 <= n; ++i) {
    w_prime.push_back(((C + 1.0) * w[i - 1] - w[i - 2]) / C);
  }
  return SequenceTable(C, std::move(w), std::move(w_prime));
}

struct ClosedFormParams {
  double C = 0.0;
  std::complex<double> x1;
  std::complex<double> x2;
  double r = 0.0;
  double theta = 0.0;
  double A = 0.0;  // alpha = A * i, beta = -alpha
};

// Roots of (2C+1) x^2 - (C^2+2C+2) x + (C^2+C+1) and the constants fitting
// S_0 = 0, S_1 = 1.
inline ClosedFormParams make_closed_form(double C) {
  check_target_ratio(C);
  const double disc = C * (C * C * C - 4.0 * C * C - 4.0 * C - 4.0);
  if (!(disc < 0.0)) throw ValidationError("closed form needs a negative discriminant");
  const double root_abs = std::sqrt(-disc);
  const double b = C * C + 2.0 * C + 2.0;
  const double denom = 2.0 * (2.0 * C + 1.0);
  ClosedFormParams p;
  p.C = C;
  p.x1 = {b / denom, root_abs / denom};
  p.x2 = std::conj(p.x1);
  p.r = std::abs(p.x1);
  p.theta = std::arg(p.x1);
  // alpha = 1 / (x1 - x2) = (2C+1) / (i sqrt|disc|)
  p.A = -(2.0 * C + 1.0) / root_abs;
  return p;
}

inline double closed_form_S(const ClosedFormParams& p, std::size_t j) {
  const double jd = static_cast<double>(j);
  return -2.0 * p.A * std::pow(p.r, jd) * std::sin(jd * p.theta);
}

// Magnitude envelope 2|A| r^j of the closed form, the natural scale for
// comparing S_j near its sign changes.
inline double closed_form_envelope(const ClosedFormParams& p, std::size_t j) {
  return 2.0 * std::abs(p.A) * std::pow(p.r, static_cast<double>(j));
}

// Runs the prefix-sum recurrence (beyond the table if needed) until the
// first S_j <= 0.
inline std::size_t first_nonpositive_S_by_recurrence(double C, std::size_t max_steps = 1'000'000) {
  check_target_ratio(C);
  const double a = (C * C + 2.0 * C + 2.0) / (2.0 * C + 1.0);
  const double b = (C * C + C + 1.0) / (2.0 * C + 1.0);
  double prev = 0.0;
  double cur = 1.0;
  for (std::size_t j = 1; j < max_steps; ++j) {
    const double next = a * cur - b * prev;
    if (next <= 0.0) return j + 1;
    prev = cur;
    cur = next;
  }
  throw ValidationError("no sign change within max_steps");
}

// First j >= 1 with sin(j theta) <= 0.
inline std::size_t first_nonpositive_S_by_closed_form(const ClosedFormParams& p) {
  if (!(p.theta > 0.0 && p.theta < std::numbers::pi)) {
    throw ValidationError("theta must lie in (0, pi)");
  }
  auto j = static_cast<std::size_t>(std::ceil(std::numbers::pi / p.theta));
  while (j > 1 && closed_form_S(p, j - 1) <= 0.0) --j;
  while (closed_form_S(p, j) > 0.0) ++j;
  return j;
}

struct IdentityReport {
  bool ok = true;
  std::optional<std::size_t> first_failing_index;
  int failing_identity = 0;  // 1 or 2
  double max_relative_error = 0.0;
  std::size_t checked = 0;
};

// Checks, relative to the largest term involved,
//   (1)  w'_{i+1} + w_{i+1} + S_{i-1} = C w_i          for i = 1..n-2
//   (2)  S_{i-2} + w_i + w_{i+1} + w'_{i+1} = C w'_i   for i = 2..n-2
inline IdentityReport verify_identities(const SequenceTable& t, double C, double tol = 1e-9) {
  IdentityReport report;
  auto record = [&](std::size_t i, int which, double lhs, double rhs, double scale) {
    const double err = std::abs(lhs - rhs) / std::max(scale, 1e-300);
    report.max_relative_error = std::max(report.max_relative_error, err);
    ++report.checked;
    if (err > tol && report.ok) {
      report.ok = false;
      report.first_failing_index = i;
      report.failing_identity = which;
    }
  };
  const std::size_t n = t.n();
  for (std::size_t i = 1; i + 2 <= n; ++i) {
    const double lhs = t.w_prime(i + 1) + t.w(i + 1) + t.S(i - 1);
    const double rhs = C * t.w(i);
    const double scale = std::max({std::abs(t.w_prime(i + 1)), std::abs(t.w(i + 1)),
                                   std::abs(t.S(i - 1)), std::abs(rhs)});
    record(i, 1, lhs, rhs, scale);
  }
  for (std::size_t i = 2; i + 2 <= n; ++i) {
    const double lhs = t.S(i - 2) + t.w(i) + t.w(i + 1) + t.w_prime(i + 1);
    const double rhs = C * t.w_prime(i);
    const double scale = std::max({std::abs(t.S(i - 2)), std::abs(t.w(i)), std::abs(t.w(i + 1)),
                                   std::abs(t.w_prime(i + 1)), std::abs(rhs)});
    record(i, 2, lhs, rhs, scale);
  }
  return report;
}

}  // namespace ssmatch
