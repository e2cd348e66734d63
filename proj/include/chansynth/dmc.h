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

#ifndef CHANSYNTH_DMC_H_
#define CHANSYNTH_DMC_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chansynth {

// Probabilities and log-likelihoods are carried in extended precision.
using Real = long double;

inline constexpr Real kStochasticTolerance = 1e-12L;
inline constexpr Real kSingularTolerance = 1e-12L;

// Per-symbol base-2 log-likelihood ratios lambda(x, y) = log2(p(y|x) / p(y)),
// defined only on the support of the joint distribution.
class LlrTable {
 public:
  LlrTable() = default;
  LlrTable(std::size_t x_size, std::size_t y_size)
      : x_size_(x_size),
        y_size_(y_size),
        lam_(x_size * y_size, 0.0L),
        support_(x_size * y_size, 0) {}

  std::size_t x_size() const { return x_size_; }
  std::size_t y_size() const { return y_size_; }
  bool defined(std::size_t x, std::size_t y) const {
    return support_[x * y_size_ + y] != 0;
  }
  // Precondition: defined(x, y).
  Real at(std::size_t x, std::size_t y) const { return lam_[x * y_size_ + y]; }

  void Set(std::size_t x, std::size_t y, Real value) {
    lam_[x * y_size_ + y] = value;
    support_[x * y_size_ + y] = 1;
  }

 private:
  std::size_t x_size_ = 0;
  std::size_t y_size_ = 0;
  std::vector<Real> lam_;
  std::vector<unsigned char> support_;
};

struct SingularityWitness {
  std::size_t y;
  std::size_t x1;
  std::size_t x2;
  bool operator==(const SingularityWitness&) const = default;
};

struct Singularity {
  bool singular = true;
  std::optional<SingularityWitness> witness;
};

// A finite discrete memoryless channel together with its input law.
// Immutable after construction.
class Dmc {
 public:
  // Validates and builds the channel. Throws Error with kEmptyAlphabet,
  // kDimensionMismatch, kNegativeEntry or kNonStochastic.
  static Dmc Validate(std::vector<Real> px,
                      std::vector<std::vector<Real>> pyx);

  std::size_t x_size() const { return px_.size(); }
  std::size_t y_size() const { return py_.size(); }

  Real px(std::size_t x) const { return px_[x]; }
  Real pyx(std::size_t x, std::size_t y) const {
    return pyx_[x * y_size() + y];
  }
  Real py(std::size_t y) const { return py_[y]; }
  Real joint(std::size_t x, std::size_t y) const { return px(x) * pyx(x, y); }

  std::span<const Real> input_law() const { return px_; }
  std::span<const Real> output_law() const { return py_; }

  // For singular distributions every entry of a column is snapped to the
  // value of the first supported row, so lambda is exactly a function of y.
  const LlrTable& llr() const { return llr_; }
  const Singularity& singularity() const { return singularity_; }

 private:
  Dmc() = default;

  std::vector<Real> px_;
  std::vector<Real> pyx_;  // row-major |X| x |Y|
  std::vector<Real> py_;
  LlrTable llr_;
  Singularity singularity_;
};

std::vector<Real> MarginalY(const Dmc& dmc);

// I(X;Y) in bits.
Real MutualInformation(const Dmc& dmc);

// Discrete singularity criterion: every pair of inputs with positive
// probability that reaches a common output does so with equal likelihood.
// The witness is the first violating (y, x1 < x2) in lexicographic order.
Singularity IsSingular(const Dmc& dmc);

// Variance of lambda(X, Y) under the joint law, in bits^2.
Real LlrSigma2(const Dmc& dmc);

// Maximum of lambda over the joint support.
Real MaxLlr(const Dmc& dmc);

Dmc MakeBsc(Real crossover, Real p0 = 0.5L);
Dmc MakeBec(Real erasure, Real p0 = 0.5L);
Dmc MakeIdentity(std::size_t size);

// Channel spec documents are JSON objects:
//   {"x_size": 2, "y_size": 2, "px": ["0.5", "0.5"],
//    "pyx": [["0.89", "0.11"], ["0.11", "0.89"]]}
// Probabilities are decimal strings parsed at long double precision; plain
// JSON numbers are also accepted.
Dmc ParseChannelSpec(std::string_view text);
Dmc LoadChannelSpec(const std::filesystem::path& path);
std::string FormatChannelSpec(const Dmc& dmc);

}  // namespace chansynth

#endif  // CHANSYNTH_DMC_H_
