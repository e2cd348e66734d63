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

#ifndef CHANSYNTH_LLR_DIST_H_
#define CHANSYNTH_LLR_DIST_H_

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chansynth/dmc.h"

namespace chansynth {

// Uniform quantizer mapping [j*delta, (j+1)*delta) to j*delta.
class Quantizer {
 public:
  explicit Quantizer(Real delta = 0.5L);
  Real delta() const { return delta_; }

 private:
  Real delta_;
};

struct BinValue {
  std::int64_t index = 0;
  Real delta = 0.5L;

  Real value() const { return static_cast<Real>(index) * delta; }
  bool operator==(const BinValue& o) const { return index == o.index; }
};

// Relative distance (in units of delta) below which a value counts as
// sitting on a bin edge.
inline constexpr Real kBinEdgeTolerance = 1e-9L;

// Throws kBinBoundaryAmbiguity when v/delta is within kBinEdgeTolerance of an
// integer without being exactly that integer.
BinValue Quantize(const Quantizer& q, Real v);

// Bin index of -log2(p) for p in (0, 1]. Values within kBinEdgeTolerance of
// an edge are snapped onto it.
std::int64_t QuantizeNegLog2(const Quantizer& q, Real p);

// Input-sequence type: occurrence count per input symbol.
struct XType {
  std::vector<int> counts;

  int n() const;
  static XType FromSequence(std::span<const int> xseq, std::size_t x_size);
  auto operator<=>(const XType&) const = default;
};

struct GammaPmf {
  std::map<std::int64_t, Real> atoms;  // bin index -> probability
  int n = 0;
  Real delta = 0.5L;
  std::string conditioning;

  Real Prob(std::int64_t bin) const;
  Real Total() const;
  // Mean of the bin values, in bits.
  Real MeanValue() const;
};

// Quantized negative log-probabilities sent as side information.
struct BarTriple {
  std::int64_t g1 = 0;
  std::int64_t g2 = 0;
  std::int64_t gg = 0;

  std::int64_t gbar() const { return g2 - g1; }
  auto operator<=>(const BarTriple&) const = default;
};

template <typename Map>
Real PmfEntropy(const Map& pmf) {
  Real h = 0.0L;
  for (const auto& [key, p] : pmf) {
    if (p > 0.0L) h -= p * std::log2(p);
  }
  return h;
}
Real PmfEntropy(std::span<const Real> probs);

// Distinct per-symbol LLR values. A block LLR is a function of the count of
// positions falling in each category, evaluated in one canonical order so
// that equal multisets of terms give bit-identical sums.
class LlrCategories {
 public:
  explicit LlrCategories(const Dmc& dmc);

  std::size_t size() const { return values_.size(); }
  Real value(std::size_t k) const { return values_[k]; }
  // -1 outside the joint support.
  int category(std::size_t x, std::size_t y) const {
    return table_[x * y_size_ + y];
  }
  // For singular distributions: category of an output symbol alone.
  int output_category(std::size_t y) const { return by_output_[y]; }

  Real BlockLlr(std::span<const int> counts) const;

 private:
  std::size_t y_size_;
  std::vector<Real> values_;
  std::vector<int> table_;
  std::vector<int> by_output_;
};

// Exact distribution of the unquantized block LLR keyed by its canonical
// value.
std::map<Real, Real> LlrSumGivenXType(const Dmc& dmc, int n, const XType& t);
std::map<Real, Real> LlrSumMarginal(const Dmc& dmc, int n);

std::vector<XType> EnumerateTypes(const Dmc& dmc, int n);
Real TypeProbability(const Dmc& dmc, const XType& t);

GammaPmf GammaGivenXType(const Dmc& dmc, const Quantizer& q, int n,
                         const XType& t);
GammaPmf GammaMarginal(const Dmc& dmc, const Quantizer& q, int n);
BarTriple ComputeBarTriple(const Dmc& dmc, const Quantizer& q, int n,
                           const XType& t, BinValue gamma);
std::map<BarTriple, Real> TripleMarginal(const Dmc& dmc, const Quantizer& q,
                                         int n);
GammaPmf CondGammaGivenTriple(const Dmc& dmc, const Quantizer& q, int n,
                              const XType& t, const BarTriple& triple);

struct SideInfoEntropies {
  Real h_gamma = 0;
  Real h_gamma_given_x = 0;
  Real h_g1 = 0;
  Real h_g2 = 0;
  Real h_gg = 0;
  Real h_triple = 0;
};

// Every quantity the synthesis scheme needs for one (channel, delta, n),
// precomputed over all input types.
class LlrModel {
 public:
  LlrModel(Dmc dmc, Quantizer q, int n);

  const Dmc& dmc() const { return dmc_; }
  const Quantizer& quantizer() const { return q_; }
  int n() const { return n_; }
  const LlrCategories& categories() const { return categories_; }

  const std::vector<XType>& types() const { return types_; }
  Real type_probability(std::size_t t) const { return type_prob_[t]; }
  // Throws kPrecondition for counts that are not a valid type.
  std::size_t TypeIndex(const XType& t) const;

  const GammaPmf& marginal() const { return marginal_; }
  const GammaPmf& conditional(std::size_t t) const { return cond_[t]; }

  // Throws kZeroProbabilityConditioning if gamma is outside p(.|t).
  const BarTriple& Triple(std::size_t t, std::int64_t gamma) const;
  // p(g1, g2 | t).
  Real PairProbability(std::size_t t, std::int64_t g1, std::int64_t g2) const;
  GammaPmf ConditionalGivenTriple(std::size_t t, const BarTriple& triple) const;

  const std::map<BarTriple, Real>& triple_marginal() const {
    return triple_marginal_;
  }
  SideInfoEntropies Entropies() const;

 private:
  Dmc dmc_;
  Quantizer q_;
  int n_;
  LlrCategories categories_;
  std::vector<XType> types_;
  std::vector<Real> type_prob_;
  std::map<XType, std::size_t> type_index_;
  std::vector<GammaPmf> cond_;
  GammaPmf marginal_;
  std::vector<std::map<std::int64_t, BarTriple>> triples_;
  std::vector<std::map<std::pair<std::int64_t, std::int64_t>, Real>> pairs_;
  std::map<BarTriple, Real> triple_marginal_;
};

}  // namespace chansynth

#endif  // CHANSYNTH_LLR_DIST_H_
