// Copyright 2026 The chansynth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHANSYNTH_STATS_H_
#define CHANSYNTH_STATS_H_

#include <cstddef>
#include <cstdint>
#include <span>

#include "chansynth/dmc.h"

namespace chansynth {

inline constexpr double kMinExpectedCount = 5.0;

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::size_t cells = 0;        // cells after tail aggregation
  std::size_t pooled_cells = 0; // cells folded into the tail bucket
  // Observations in a zero-probability cell: the fit fails outright.
  std::uint64_t impossible = 0;
};

// Pearson goodness of fit of `observed` counts against `probs`. Cells whose
// expected count is below `min_expected` are pooled into one tail bucket.
ChiSquareResult ChiSquareGof(std::span<const std::uint64_t> observed,
                             std::span<const Real> probs,
                             double min_expected = kMinExpectedCount);

// Upper tail of the chi-square law.
double ChiSquareSurvival(double statistic, int dof);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
// Ordinary least squares y = slope * x + intercept.
LineFit FitLine(std::span<const double> x, std::span<const double> y);

struct TwoFit {
  double c1 = 0.0;
  double c2 = 0.0;
};
// Least squares y = c1 * x1 + c2 * x2 without intercept.
TwoFit FitTwo(std::span<const double> x1, std::span<const double> x2,
              std::span<const double> y);

}  // namespace chansynth

#endif  // CHANSYNTH_STATS_H_
