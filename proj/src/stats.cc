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

#include "chansynth/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "chansynth/error.h"

namespace chansynth {

double ChiSquareSurvival(double statistic, int dof) {
  if (dof <= 0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

ChiSquareResult ChiSquareGof(std::span<const std::uint64_t> observed,
                             std::span<const Real> probs,
                             double min_expected) {
  if (observed.size() != probs.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "observed and expected cell counts differ in size");
  }
  std::uint64_t total = 0;
  for (std::uint64_t o : observed) total += o;
  ChiSquareResult res;
  if (total == 0) return res;

  struct Cell {
    double obs;
    double exp;
  };
  std::vector<Cell> cells;
  Cell tail{0.0, 0.0};
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double e = static_cast<double>(probs[i]) * static_cast<double>(total);
    if (!(probs[i] > 0.0L)) {
      res.impossible += observed[i];
      continue;
    }
    if (e < min_expected) {
      tail.obs += static_cast<double>(observed[i]);
      tail.exp += e;
      ++res.pooled_cells;
    } else {
      cells.push_back({static_cast<double>(observed[i]), e});
    }
  }
  if (tail.exp > 0.0) {
    if (tail.exp >= min_expected || cells.empty()) {
      cells.push_back(tail);
    } else {
      auto smallest = std::min_element(
          cells.begin(), cells.end(),
          [](const Cell& a, const Cell& b) { return a.exp < b.exp; });
      smallest->obs += tail.obs;
      smallest->exp += tail.exp;
    }
  }
  if (res.impossible > 0) {
    res.statistic = std::numeric_limits<double>::infinity();
    res.p_value = 0.0;
    res.cells = cells.size();
    res.dof = static_cast<int>(cells.size()) - 1;
    return res;
  }
  for (const Cell& c : cells) {
    const double d = c.obs - c.exp;
    res.statistic += d * d / c.exp;
  }
  res.cells = cells.size();
  res.dof = static_cast<int>(cells.size()) - 1;
  res.p_value = ChiSquareSurvival(res.statistic, res.dof);
  return res;
}

LineFit FitLine(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::kDomainError, "line fit needs >= 2 paired points");
  }
  const double k = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::kDomainError, "degenerate regressor");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

TwoFit FitTwo(std::span<const double> x1, std::span<const double> x2,
              std::span<const double> y) {
  if (x1.size() != y.size() || x2.size() != y.size() || y.size() < 2) {
    throw Error(ErrorCode::kDomainError, "two-term fit needs >= 2 points");
  }
  double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    a11 += x1[i] * x1[i];
    a12 += x1[i] * x2[i];
    a22 += x2[i] * x2[i];
    b1 += x1[i] * y[i];
    b2 += x2[i] * y[i];
  }
  const double det = a11 * a22 - a12 * a12;
  if (!(std::fabs(det) > 1e-300)) {
    throw Error(ErrorCode::kDomainError, "collinear regressors");
  }
  return {(b1 * a22 - b2 * a12) / det, (a11 * b2 - a12 * b1) / det};
}

}  // namespace chansynth
