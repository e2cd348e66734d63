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

#include "chansynth/llr_dist.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "chansynth/error.h"

namespace chansynth {
namespace {

using Counts = std::vector<int>;
using CountPmf = std::map<Counts, Real>;

// Law of the category-count vector after `reps` i.i.d. draws from `weights`.
CountPmf MultinomialCounts(std::span<const Real> weights, int reps) {
  CountPmf dist{{Counts(weights.size(), 0), 1.0L}};
  for (int step = 0; step < reps; ++step) {
    CountPmf next;
    for (const auto& [counts, p] : dist) {
      for (std::size_t k = 0; k < weights.size(); ++k) {
        if (weights[k] <= 0.0L) continue;
        Counts c = counts;
        ++c[k];
        next[std::move(c)] += p * weights[k];
      }
    }
    dist = std::move(next);
  }
  return dist;
}

CountPmf Convolve(const CountPmf& a, const CountPmf& b) {
  CountPmf out;
  for (const auto& [ca, pa] : a) {
    for (const auto& [cb, pb] : b) {
      Counts c = ca;
      for (std::size_t k = 0; k < c.size(); ++k) c[k] += cb[k];
      out[std::move(c)] += pa * pb;
    }
  }
  return out;
}

void CheckType(const Dmc& dmc, int n, const XType& t) {
  if (n < 1) throw Error(ErrorCode::kPrecondition, "blocklength must be >= 1");
  if (t.counts.size() != dmc.x_size()) {
    throw Error(ErrorCode::kPrecondition, "type has wrong alphabet size");
  }
  if (t.n() != n) {
    throw Error(ErrorCode::kPrecondition, "type counts do not sum to n");
  }
  for (std::size_t a = 0; a < t.counts.size(); ++a) {
    if (t.counts[a] < 0) throw Error(ErrorCode::kPrecondition, "negative count");
    if (t.counts[a] > 0 && dmc.px(a) <= 0.0L) {
      throw Error(ErrorCode::kPrecondition,
                  "type uses an input symbol with zero probability");
    }
  }
}

Real Binomial(int n, int k) {
  Real r = 1.0L;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<Real>(n - k + i) / static_cast<Real>(i);
  }
  return r;
}

void EnumerateRec(const Dmc& dmc, std::size_t a, int remaining, Counts& cur,
                  std::vector<XType>& out) {
  if (a + 1 == dmc.x_size()) {
    if (remaining > 0 && dmc.px(a) <= 0.0L) return;
    cur[a] = remaining;
    out.push_back(XType{cur});
    return;
  }
  const int hi = dmc.px(a) > 0.0L ? remaining : 0;
  for (int c = 0; c <= hi; ++c) {
    cur[a] = c;
    EnumerateRec(dmc, a + 1, remaining - c, cur, out);
  }
  cur[a] = 0;
}

}  // namespace

Quantizer::Quantizer(Real delta) : delta_(delta) {
  if (!(delta > 0.0L) || !std::isfinite(delta)) {
    throw Error(ErrorCode::kDomainError, "quantizer step must be positive");
  }
}

BinValue Quantize(const Quantizer& q, Real v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::kDomainError, "cannot quantize a non-finite value");
  }
  const Real r = v / q.delta();
  const Real nearest = std::nearbyint(r);
  if (r != nearest && std::fabs(r - nearest) < kBinEdgeTolerance) {
    std::ostringstream os;
    os.precision(21);
    os << "value " << v << " is numerically on the edge of bin " << nearest
       << " for delta " << q.delta();
    throw Error(ErrorCode::kBinBoundaryAmbiguity, os.str());
  }
  return BinValue{static_cast<std::int64_t>(std::floor(r)), q.delta()};
}

std::int64_t QuantizeNegLog2(const Quantizer& q, Real p) {
  if (!(p > 0.0L) || p > 1.0L + kStochasticTolerance) {
    throw Error(ErrorCode::kZeroProbabilityConditioning,
                "probability outside (0, 1]");
  }
  if (p >= 1.0L) return 0;
  const Real r = -std::log2(p) / q.delta();
  const Real nearest = std::nearbyint(r);
  if (std::fabs(r - nearest) < kBinEdgeTolerance) {
    return static_cast<std::int64_t>(nearest);
  }
  return static_cast<std::int64_t>(std::floor(r));
}

int XType::n() const { return std::accumulate(counts.begin(), counts.end(), 0); }

XType XType::FromSequence(std::span<const int> xseq, std::size_t x_size) {
  XType t{std::vector<int>(x_size, 0)};
  for (int x : xseq) {
    if (x < 0 || static_cast<std::size_t>(x) >= x_size) {
      throw Error(ErrorCode::kPrecondition, "input symbol out of range");
    }
    ++t.counts[x];
  }
  return t;
}

Real GammaPmf::Prob(std::int64_t bin) const {
  auto it = atoms.find(bin);
  return it == atoms.end() ? 0.0L : it->second;
}

Real GammaPmf::Total() const {
  Real s = 0.0L;
  for (const auto& [bin, p] : atoms) s += p;
  return s;
}

Real GammaPmf::MeanValue() const {
  Real m = 0.0L;
  for (const auto& [bin, p] : atoms) m += p * static_cast<Real>(bin) * delta;
  return m;
}

Real PmfEntropy(std::span<const Real> probs) {
  Real h = 0.0L;
  for (Real p : probs) {
    if (p > 0.0L) h -= p * std::log2(p);
  }
  return h;
}

LlrCategories::LlrCategories(const Dmc& dmc)
    : y_size_(dmc.y_size()),
      table_(dmc.x_size() * dmc.y_size(), -1),
      by_output_(dmc.y_size(), -1) {
  const LlrTable& llr = dmc.llr();
  for (std::size_t x = 0; x < dmc.x_size(); ++x) {
    for (std::size_t y = 0; y < dmc.y_size(); ++y) {
      if (llr.defined(x, y)) values_.push_back(llr.at(x, y));
    }
  }
  std::sort(values_.begin(), values_.end());
  values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
  for (std::size_t x = 0; x < dmc.x_size(); ++x) {
    for (std::size_t y = 0; y < dmc.y_size(); ++y) {
      if (!llr.defined(x, y)) continue;
      const auto it =
          std::lower_bound(values_.begin(), values_.end(), llr.at(x, y));
      table_[x * y_size_ + y] = static_cast<int>(it - values_.begin());
    }
  }
  if (dmc.singularity().singular) {
    for (std::size_t y = 0; y < dmc.y_size(); ++y) {
      for (std::size_t x = 0; x < dmc.x_size(); ++x) {
        if (table_[x * y_size_ + y] >= 0) {
          by_output_[y] = table_[x * y_size_ + y];
          break;
        }
      }
    }
  }
}

Real LlrCategories::BlockLlr(std::span<const int> counts) const {
  Real sum = 0.0L;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (counts[k] != 0) sum += static_cast<Real>(counts[k]) * values_[k];
  }
  return sum;
}

namespace {

CountPmf CategoryCountsGivenType(const Dmc& dmc, const LlrCategories& cats,
                                 const XType& t) {
  CountPmf dist{{Counts(cats.size(), 0), 1.0L}};
  for (std::size_t a = 0; a < dmc.x_size(); ++a) {
    if (t.counts[a] == 0) continue;
    std::vector<Real> w(cats.size(), 0.0L);
    for (std::size_t y = 0; y < dmc.y_size(); ++y) {
      const int k = cats.category(a, y);
      if (k >= 0) w[k] += dmc.pyx(a, y);
    }
    dist = Convolve(dist, MultinomialCounts(w, t.counts[a]));
  }
  return dist;
}

std::map<Real, Real> LlrSumFromCounts(const LlrCategories& cats,
                                      const CountPmf& dist) {
  std::map<Real, Real> out;
  for (const auto& [counts, p] : dist) out[cats.BlockLlr(counts)] += p;
  return out;
}

GammaPmf Bin(const Quantizer& q, int n, const std::map<Real, Real>& sums,
             std::string conditioning) {
  GammaPmf pmf;
  pmf.n = n;
  pmf.delta = q.delta();
  pmf.conditioning = std::move(conditioning);
  for (const auto& [v, p] : sums) pmf.atoms[Quantize(q, v).index] += p;
  return pmf;
}

std::string Describe(const XType& t) {
  std::ostringstream os;
  os << "type(";
  for (std::size_t i = 0; i < t.counts.size(); ++i) {
    os << (i ? "," : "") << t.counts[i];
  }
  os << ")";
  return os.str();
}

}  // namespace

std::map<Real, Real> LlrSumGivenXType(const Dmc& dmc, int n, const XType& t) {
  CheckType(dmc, n, t);
  LlrCategories cats(dmc);
  return LlrSumFromCounts(cats, CategoryCountsGivenType(dmc, cats, t));
}

std::map<Real, Real> LlrSumMarginal(const Dmc& dmc, int n) {
  if (n < 1) throw Error(ErrorCode::kPrecondition, "blocklength must be >= 1");
  LlrCategories cats(dmc);
  std::map<Real, Real> out;
  for (const XType& t : EnumerateTypes(dmc, n)) {
    const Real pt = TypeProbability(dmc, t);
    for (const auto& [v, p] :
         LlrSumFromCounts(cats, CategoryCountsGivenType(dmc, cats, t))) {
      out[v] += pt * p;
    }
  }
  return out;
}

std::vector<XType> EnumerateTypes(const Dmc& dmc, int n) {
  if (n < 1) throw Error(ErrorCode::kPrecondition, "blocklength must be >= 1");
  std::vector<XType> out;
  Counts cur(dmc.x_size(), 0);
  EnumerateRec(dmc, 0, n, cur, out);
  return out;
}

Real TypeProbability(const Dmc& dmc, const XType& t) {
  Real p = 1.0L;
  int remaining = t.n();
  for (std::size_t a = 0; a < t.counts.size(); ++a) {
    const int c = t.counts[a];
    if (c == 0) continue;
    p *= Binomial(remaining, c) * std::pow(dmc.px(a), static_cast<Real>(c));
    remaining -= c;
  }
  return p;
}

GammaPmf GammaGivenXType(const Dmc& dmc, const Quantizer& q, int n,
                         const XType& t) {
  return Bin(q, n, LlrSumGivenXType(dmc, n, t), Describe(t));
}

GammaPmf GammaMarginal(const Dmc& dmc, const Quantizer& q, int n) {
  return LlrModel(dmc, q, n).marginal();
}

BarTriple ComputeBarTriple(const Dmc& dmc, const Quantizer& q, int n,
                           const XType& t, BinValue gamma) {
  CheckType(dmc, n, t);
  LlrModel model(dmc, q, n);
  return model.Triple(model.TypeIndex(t), gamma.index);
}

std::map<BarTriple, Real> TripleMarginal(const Dmc& dmc, const Quantizer& q,
                                         int n) {
  return LlrModel(dmc, q, n).triple_marginal();
}

GammaPmf CondGammaGivenTriple(const Dmc& dmc, const Quantizer& q, int n,
                              const XType& t, const BarTriple& triple) {
  CheckType(dmc, n, t);
  LlrModel model(dmc, q, n);
  return model.ConditionalGivenTriple(model.TypeIndex(t), triple);
}

LlrModel::LlrModel(Dmc dmc, Quantizer q, int n)
    : dmc_(std::move(dmc)), q_(q), n_(n), categories_(dmc_) {
  types_ = EnumerateTypes(dmc_, n_);
  marginal_.n = n_;
  marginal_.delta = q_.delta();
  marginal_.conditioning = "marginal";
  for (std::size_t i = 0; i < types_.size(); ++i) {
    const XType& t = types_[i];
    type_index_[t] = i;
    type_prob_.push_back(TypeProbability(dmc_, t));
    cond_.push_back(Bin(q_, n_,
                        LlrSumFromCounts(categories_, CategoryCountsGivenType(
                                                          dmc_, categories_, t)),
                        Describe(t)));
    for (const auto& [bin, p] : cond_.back().atoms) {
      marginal_.atoms[bin] += type_prob_.back() * p;
    }
  }

  triples_.resize(types_.size());
  pairs_.resize(types_.size());
  for (std::size_t i = 0; i < types_.size(); ++i) {
    std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> g12;
    for (const auto& [bin, p] : cond_[i].atoms) {
      const std::int64_t g1 = QuantizeNegLog2(q_, p);
      const std::int64_t g2 = QuantizeNegLog2(q_, marginal_.Prob(bin));
      g12[bin] = {g1, g2};
      pairs_[i][{g1, g2}] += p;
    }
    for (const auto& [bin, g] : g12) {
      const BarTriple triple{g.first, g.second,
                             QuantizeNegLog2(q_, pairs_[i].at(g))};
      triples_[i][bin] = triple;
      triple_marginal_[triple] += type_prob_[i] * cond_[i].atoms.at(bin);
    }
  }
}

std::size_t LlrModel::TypeIndex(const XType& t) const {
  auto it = type_index_.find(t);
  if (it == type_index_.end()) {
    throw Error(ErrorCode::kPrecondition, "not a valid type for this model");
  }
  return it->second;
}

const BarTriple& LlrModel::Triple(std::size_t t, std::int64_t gamma) const {
  auto it = triples_[t].find(gamma);
  if (it == triples_[t].end()) {
    throw Error(ErrorCode::kZeroProbabilityConditioning,
                "gamma bin " + std::to_string(gamma) +
                    " has zero probability given " + Describe(types_[t]));
  }
  return it->second;
}

Real LlrModel::PairProbability(std::size_t t, std::int64_t g1,
                               std::int64_t g2) const {
  auto it = pairs_[t].find({g1, g2});
  return it == pairs_[t].end() ? 0.0L : it->second;
}

GammaPmf LlrModel::ConditionalGivenTriple(std::size_t t,
                                          const BarTriple& triple) const {
  const Real norm = PairProbability(t, triple.g1, triple.g2);
  if (!(norm > 0.0L)) {
    throw Error(ErrorCode::kZeroProbabilityConditioning,
                "side-information pair has zero probability");
  }
  GammaPmf out;
  out.n = n_;
  out.delta = q_.delta();
  out.conditioning = Describe(types_[t]) + "+pair";
  for (const auto& [bin, p] : cond_[t].atoms) {
    const BarTriple& b = triples_[t].at(bin);
    if (b.g1 == triple.g1 && b.g2 == triple.g2) out.atoms[bin] = p / norm;
  }
  return out;
}

SideInfoEntropies LlrModel::Entropies() const {
  std::map<std::int64_t, Real> g1, g2, gg;
  SideInfoEntropies h;
  for (std::size_t i = 0; i < types_.size(); ++i) {
    h.h_gamma_given_x += type_prob_[i] * PmfEntropy(cond_[i].atoms);
    for (const auto& [bin, p] : cond_[i].atoms) {
      const BarTriple& b = triples_[i].at(bin);
      const Real w = type_prob_[i] * p;
      g1[b.g1] += w;
      g2[b.g2] += w;
      gg[b.gg] += w;
    }
  }
  h.h_gamma = PmfEntropy(marginal_.atoms);
  h.h_g1 = PmfEntropy(g1);
  h.h_g2 = PmfEntropy(g2);
  h.h_gg = PmfEntropy(gg);
  h.h_triple = PmfEntropy(triple_marginal_);
  return h;
}

}  // namespace chansynth
