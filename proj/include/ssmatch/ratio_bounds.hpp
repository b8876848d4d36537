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

#pragma once

#include <cmath>

#include "ssmatch/error.hpp"

namespace ssmatch {

// OPT / ALG guarantee of the unshifted bucket algorithm (without epsilon).
inline double deterministic_ratio_bound(double gamma) {
  return 2.0 * gamma * gamma / (gamma - 1.0);
}

// Guarantee of the uniformly shifted variant in expectation.
inline double randomized_ratio_bound(double gamma) {
  return 2.0 * gamma * gamma * std::log(gamma) / ((gamma - 1.0) * (gamma - 1.0));
}

// Guarantee of the best-of-q ensemble on the grid delta = t/q.
inline double ensemble_ratio_bound(double gamma, int q) {
  return randomized_ratio_bound(gamma) * std::pow(gamma, 1.0 / q);
}

// TW <= charging_factor * w(M): each matched edge pays for at most two vertices
// per class at or below its own.
inline double charging_factor(double gamma) { return 2.0 * gamma / (gamma - 1.0); }

struct GammaOptimum {
  double gamma = 0.0;
  double bound = 0.0;
};

// Golden-section search for the gamma minimising randomized_ratio_bound on
// [lo, hi]; the function is unimodal there for 1 < lo.
inline GammaOptimum optimize_gamma(double lo = 1.5, double hi = 10.0, double tol = 1e-10) {
  if (!(lo > 1.0 && hi > lo)) throw ValidationError("need 1 < lo < hi");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = randomized_ratio_bound(c);
  double fd = randomized_ratio_bound(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = randomized_ratio_bound(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = randomized_ratio_bound(d);
    }
  }
  const double g = 0.5 * (a + b);
  return GammaOptimum{g, randomized_ratio_bound(g)};
}

}  // namespace ssmatch
