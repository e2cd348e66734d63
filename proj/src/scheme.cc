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

#include "chansynth/scheme.h"

#include <cmath>
#include <optional>

#include "chansynth/error.h"
#include "chansynth/golomb.h"
#include "json.hpp"

namespace chansynth {
namespace {

constexpr std::string_view kAuxKey = "aux";
constexpr std::string_view kBaselineKey = "baseline";

// Sum of per-letter LLRs of (x, y) in canonical category order, or nullopt
// outside the joint support.
std::optional<Real> BlockSum(const LlrCategories& cats, std::span<const int> x,
                             std::span<const int> y) {
  thread_local std::vector<int> counts;
  counts.assign(cats.size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int k = cats.category(x[i], y[i]);
    if (k < 0) return std::nullopt;
    ++counts[k];
  }
  return cats.BlockLlr(counts);
}

void WriteGolomb(long double tau, std::uint64_t index, BitWriter& w) {
  GolombCode(GolombParamForCeiling(tau)).Encode(index, w);
}

std::uint64_t GolombLength(long double tau, std::uint64_t index) {
  return GolombCode(GolombParamForCeiling(tau)).Length(index);
}

std::uint64_t SampleGolombLength(long double tau, PrivateRng& rng) {
  const GolombLengthLaw law(1.0L / tau);
  const double u1 = rng.Uniform();
  const double u2 = rng.Uniform();
  return law.Sample(u1, u2);
}

}  // namespace

std::string_view SchemeModeName(SchemeMode mode) {
  switch (mode) {
    case SchemeMode::kAuto:
      return "auto";
    case SchemeMode::kForceSingular:
      return "force-singular";
    case SchemeMode::kForceNonsingular:
      return "force-nonsingular";
  }
  return "auto";
}

SchemeMode ParseSchemeMode(std::string_view name) {
  if (name == "auto") return SchemeMode::kAuto;
  if (name == "force-singular") return SchemeMode::kForceSingular;
  if (name == "force-nonsingular") return SchemeMode::kForceNonsingular;
  throw Error(ErrorCode::kParseError, "unknown scheme mode: " + std::string(name));
}

std::uint64_t GolombParamForCeiling(long double tau) {
  if (tau <= 1.0L) return 1;
  return GolombParamFor(1.0L / tau);
}

std::string TraceToJson(const SchemeTrace& t) {
  nlohmann::ordered_json j;
  j["gamma_bin"] = t.gamma_bin;
  j["g1"] = t.triple.g1;
  j["g2"] = t.triple.g2;
  j["gg"] = t.triple.gg;
  j["tau_aux"] = static_cast<double>(t.tau_aux);
  j["tau"] = static_cast<double>(t.tau);
  j["K"] = t.k == 0 ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(t.k);
  j["J"] = t.j == 0 ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(t.j);
  j["len_triple"] = t.len_triple;
  j["len_K"] = t.len_k;
  j["len_J"] = t.len_j;
  j["delta"] = static_cast<double>(t.delta);
  j["singular"] = t.singular;
  j["proposal"] = t.proposal;
  return j.dump();
}

ConditionalProposalSampler::ConditionalProposalSampler(
    const SynthScheme& scheme, std::uint64_t seed, std::int64_t gamma)
    : scheme_(scheme), stream_(seed, SynthScheme::PrimaryKey(gamma)),
      gamma_(gamma) {
  if (!scheme.singular()) {
    throw Error(ErrorCode::kPrecondition,
                "conditional proposal requires the singular construction");
  }
  if (!(scheme.model().marginal().Prob(gamma) > 0.0L)) {
    throw Error(ErrorCode::kZeroProbabilityConditioning,
                "gamma bin has zero marginal probability");
  }
}

const std::vector<int>& ConditionalProposalSampler::Item(std::uint64_t j) {
  if (j == 0) throw Error(ErrorCode::kDomainError, "codebook indices are >= 1");
  if (j < accepted_ || (j == accepted_ && current_.empty())) {
    accepted_ = 0;
    raw_ = 0;
  }
  const std::uint64_t limit = scheme_.config().iteration_limit;
  while (accepted_ < j) {
    if (raw_ >= limit) {
      throw Error(ErrorCode::kIterationLimit,
                  "conditional proposal stream exhausted the iteration limit");
    }
    ++raw_;
    scheme_.OutputItem(stream_, raw_, current_);
    if (scheme_.OutputBin(current_) == gamma_) ++accepted_;
  }
  return current_;
}

SynthScheme::SynthScheme(SchemeConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.n < 1) throw Error(ErrorCode::kPrecondition, "n must be >= 1");
  const bool channel_singular = cfg_.dmc.singularity().singular;
  switch (cfg_.mode) {
    case SchemeMode::kAuto:
      singular_ = channel_singular;
      break;
    case SchemeMode::kForceSingular:
      if (!channel_singular) {
        throw Error(ErrorCode::kPrecondition,
                    "force-singular requested for a nonsingular channel");
      }
      singular_ = true;
      break;
    case SchemeMode::kForceNonsingular:
      singular_ = false;
      break;
  }
  model_ = std::make_unique<LlrModel>(cfg_.dmc, cfg_.q, cfg_.n);
  const LlrModel& m = *model_;
  triple_code_ = KeyedHuffman<BarTriple>(m.triple_marginal());

  std::vector<Real> probs;
  for (const auto& [bin, p] : m.marginal().atoms) {
    marginal_bins_.push_back(bin);
    probs.push_back(p);
  }
  marginal_sampler_ = DiscreteSampler(probs);
  output_sampler_ = DiscreteSampler(cfg_.dmc.output_law());

  ghosts_.resize(m.types().size());
  aux_.resize(m.types().size());
  for (std::size_t t = 0; t < m.types().size(); ++t) {
    std::vector<Real> cond;
    for (const auto& [bin, p] : m.conditional(t).atoms) {
      ghosts_[t].bins.push_back(bin);
      cond.push_back(p);
      const BarTriple& triple = m.Triple(t, bin);
      if (aux_[t].count(triple) != 0) continue;
      const GammaPmf target = m.ConditionalGivenTriple(t, triple);
      AuxEntry entry;
      for (std::size_t a = 0; a < marginal_bins_.size(); ++a) {
        entry.ratio.push_back(target.Prob(marginal_bins_[a]) / probs[a]);
      }
      std::vector<Real> tp;
      for (const auto& [tb, p] : target.atoms) {
        entry.bins.push_back(tb);
        tp.push_back(p);
      }
      entry.target = DiscreteSampler(tp);
      aux_[t].emplace(triple, std::move(entry));
    }
    ghosts_[t].sampler = DiscreteSampler(cond);
  }
  baseline_ceiling_ =
      std::exp2(static_cast<long double>(cfg_.n) * MaxLlr(cfg_.dmc));
  if (baseline_ceiling_ < 1.0L) baseline_ceiling_ = 1.0L;
}

std::string SynthScheme::PrimaryKey(std::int64_t gamma) {
  return "primary:" + std::to_string(gamma);
}

void SynthScheme::CheckInput(std::span<const int> x) const {
  if (x.size() != static_cast<std::size_t>(cfg_.n)) {
    throw Error(ErrorCode::kPrecondition, "input length differs from n");
  }
  for (int a : x) {
    if (a < 0 || static_cast<std::size_t>(a) >= cfg_.dmc.x_size()) {
      throw Error(ErrorCode::kPrecondition, "input symbol out of range");
    }
    if (!(cfg_.dmc.px(a) > 0.0L)) {
      throw Error(ErrorCode::kPrecondition,
                  "input symbol has zero source probability");
    }
  }
}

std::size_t SynthScheme::TypeIndexOf(std::span<const int> x) const {
  return model_->TypeIndex(XType::FromSequence(x, cfg_.dmc.x_size()));
}

const SynthScheme::AuxEntry& SynthScheme::Aux(std::size_t t,
                                              const BarTriple& triple) const {
  auto it = aux_[t].find(triple);
  if (it == aux_[t].end()) {
    throw Error(ErrorCode::kZeroProbabilityConditioning,
                "side-information triple has zero probability for this input");
  }
  return it->second;
}

long double SynthScheme::AuxCeiling(const BarTriple& triple) const {
  return std::exp2(Value(triple.gbar()) + Value(triple.gg) +
                   3.0L * cfg_.q.delta());
}

long double SynthScheme::PrimaryCeiling(std::int64_t gamma,
                                        const BarTriple& triple) const {
  const Real two_delta = 2.0L * cfg_.q.delta();
  if (singular_) {
    return std::exp2(Value(gamma) - Value(triple.gbar()) + two_delta);
  }
  return std::exp2(Value(gamma) + Value(triple.g1) + two_delta);
}

std::int64_t SynthScheme::BlockBin(std::span<const int> x,
                                   std::span<const int> y) const {
  const auto sum = BlockSum(model_->categories(), x, y);
  if (!sum) {
    throw Error(ErrorCode::kZeroProbabilityConditioning,
                "sequence pair outside the joint support");
  }
  return Quantize(cfg_.q, *sum).index;
}

std::int64_t SynthScheme::OutputBin(std::span<const int> y) const {
  const LlrCategories& cats = model_->categories();
  thread_local std::vector<int> counts;
  counts.assign(cats.size(), 0);
  for (int b : y) {
    const int k = cats.output_category(b);
    if (k < 0) {
      throw Error(ErrorCode::kPrecondition,
                  "output symbol has no LLR category (channel not singular)");
    }
    ++counts[k];
  }
  return Quantize(cfg_.q, cats.BlockLlr(counts)).index;
}

void SynthScheme::OutputItem(const CounterStream& stream, std::uint64_t index,
                             std::vector<int>& y) const {
  thread_local std::vector<std::uint64_t> words;
  thread_local std::vector<std::uint8_t> symbols;
  const std::size_t n = static_cast<std::size_t>(cfg_.n);
  words.resize(n + (n & 1));
  stream.ItemWords(index, words);
  y.resize(n);
  if (output_sampler_.size() <= 256) {
    symbols.resize(words.size());
    output_sampler_.SampleMany(words, symbols);
    for (std::size_t i = 0; i < n; ++i) y[i] = symbols[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = static_cast<int>(output_sampler_.Sample(words[i]));
    }
  }
}

Real SynthScheme::PrimaryLr(std::span<const int> x, std::int64_t gamma,
                            std::span<const int> y) const {
  const auto sum = BlockSum(model_->categories(), x, y);
  if (!sum || Quantize(cfg_.q, *sum).index != gamma) return 0.0L;
  const Real pt = model_->conditional(TypeIndexOf(x)).Prob(gamma);
  if (!(pt > 0.0L)) return 0.0L;
  Real r = std::exp2(*sum) / pt;
  if (singular_) r *= model_->marginal().Prob(gamma);
  return r;
}

SynthScheme::AuxOutcome SynthScheme::RunAux(std::size_t t,
                                            const BarTriple& triple,
                                            std::uint64_t common_seed,
                                            PrivateRng& rng) const {
  const AuxEntry& entry = Aux(t, triple);
  const CounterStream stream(common_seed, kAuxKey);
  const auto result = RejectionSample(
      [&](std::uint64_t i) { return marginal_sampler_.Sample(stream.Word(i)); },
      [&](std::size_t a) { return entry.ratio[a]; }, AuxCeiling(triple),
      [&] { return rng.Uniform(); }, {cfg_.iteration_limit});
  return {marginal_bins_[result.item], result.index, result.max_quotient};
}

SynthScheme::PrimaryOutcome SynthScheme::RunPrimary(
    std::span<const int> x, std::size_t t, std::int64_t gamma,
    const BarTriple& triple, std::uint64_t common_seed, PrivateRng& rng) const {
  const LlrCategories& cats = model_->categories();
  const Real pt = model_->conditional(t).Prob(gamma);
  const Real scale =
      (singular_ ? model_->marginal().Prob(gamma) : 1.0L) / pt;
  auto ratio = [&](const std::vector<int>& y) -> Real {
    const auto sum = BlockSum(cats, x, y);
    if (!sum || Quantize(cfg_.q, *sum).index != gamma) return 0.0L;
    return std::exp2(*sum) * scale;
  };
  auto uniform = [&] { return rng.Uniform(); };
  const long double tau = PrimaryCeiling(gamma, triple);
  const RejectionOptions options{cfg_.iteration_limit};
  if (singular_) {
    ConditionalProposalSampler proposal(*this, common_seed, gamma);
    auto r = RejectionSample(
        [&](std::uint64_t i) { return proposal.Item(i); }, ratio, tau, uniform,
        options);
    return {std::move(r.item), r.index, r.max_quotient};
  }
  const CounterStream stream(common_seed, PrimaryKey(gamma));
  auto r = RejectionSample(
      [&](std::uint64_t i) {
        std::vector<int> y;
        OutputItem(stream, i, y);
        return y;
      },
      ratio, tau, uniform, options);
  return {std::move(r.item), r.index, r.max_quotient};
}

std::int64_t SynthScheme::AuxItem(std::uint64_t common_seed,
                                  std::uint64_t k) const {
  const CounterStream stream(common_seed, kAuxKey);
  return marginal_bins_[marginal_sampler_.Sample(stream.Word(k))];
}

std::vector<int> SynthScheme::PrimaryItem(std::uint64_t common_seed,
                                          std::int64_t gamma,
                                          std::uint64_t j) const {
  if (singular_) {
    ConditionalProposalSampler proposal(*this, common_seed, gamma);
    return proposal.Item(j);
  }
  std::vector<int> y;
  OutputItem(CounterStream(common_seed, PrimaryKey(gamma)), j, y);
  return y;
}

EncodeResult SynthScheme::Encode(std::span<const int> x,
                                 std::uint64_t common_seed,
                                 std::uint64_t private_seed) const {
  CheckInput(x);
  PrivateRng rng(private_seed);
  const std::size_t t = TypeIndexOf(x);
  const Ghost& ghost = ghosts_[t];
  const std::int64_t ghost_bin = ghost.bins[ghost.sampler.Sample(rng.NextWord())];
  const BarTriple triple = model_->Triple(t, ghost_bin);

  EncodeResult out;
  SchemeTrace& tr = out.trace;
  tr.delta = cfg_.q.delta();
  tr.triple = triple;
  tr.singular = singular_;
  tr.proposal = singular_ ? "p(y^n|gamma)" : "p(y^n)";

  BitWriter w;
  triple_code_.Encode(triple, w);
  out.transcript.len_triple = w.size();

  const AuxOutcome aux = RunAux(t, triple, common_seed, rng);
  tr.gamma_bin = aux.gamma;
  tr.k = aux.k;
  tr.tau_aux = AuxCeiling(triple);
  tr.max_quotient_aux = aux.max_quotient;
  WriteGolomb(tr.tau_aux, aux.k, w);
  out.transcript.len_k = w.size() - out.transcript.len_triple;

  PrimaryOutcome primary = RunPrimary(x, t, aux.gamma, triple, common_seed, rng);
  tr.j = primary.j;
  tr.tau = PrimaryCeiling(aux.gamma, triple);
  tr.max_quotient_primary = primary.max_quotient;
  WriteGolomb(tr.tau, primary.j, w);
  out.transcript.len_j =
      w.size() - out.transcript.len_triple - out.transcript.len_k;

  tr.len_triple = out.transcript.len_triple;
  tr.len_k = out.transcript.len_k;
  tr.len_j = out.transcript.len_j;
  out.transcript.bits = w.Finish();
  out.y = std::move(primary.y);
  return out;
}

std::vector<int> SynthScheme::Decode(const BitString& bits,
                                     std::uint64_t common_seed,
                                     std::uint64_t index_offset) const {
  BitReader r(bits);
  const BarTriple triple = triple_code_.Decode(r);
  const std::uint64_t k =
      GolombCode(GolombParamForCeiling(AuxCeiling(triple))).Decode(r);
  const std::int64_t gamma = AuxItem(common_seed, k);
  const std::uint64_t j =
      GolombCode(GolombParamForCeiling(PrimaryCeiling(gamma, triple)))
          .Decode(r) +
      index_offset;
  if (!r.AtEnd()) {
    throw Error(ErrorCode::kMalformedBitstream, "trailing bits after transcript");
  }
  return PrimaryItem(common_seed, gamma, j);
}

SchemeTrace SynthScheme::Simulate(std::span<const int> x,
                                  std::uint64_t common_seed,
                                  std::uint64_t private_seed) const {
  CheckInput(x);
  PrivateRng rng(private_seed);
  const std::size_t t = TypeIndexOf(x);
  const Ghost& ghost = ghosts_[t];
  const std::int64_t ghost_bin = ghost.bins[ghost.sampler.Sample(rng.NextWord())];
  const BarTriple triple = model_->Triple(t, ghost_bin);

  SchemeTrace tr;
  tr.delta = cfg_.q.delta();
  tr.triple = triple;
  tr.singular = singular_;
  tr.proposal = singular_ ? "p(y^n|gamma)" : "p(y^n)";
  tr.len_triple = triple_code_.Length(triple);

  tr.tau_aux = AuxCeiling(triple);
  if (tr.tau_aux <= cfg_.scan_limit) {
    const AuxOutcome aux = RunAux(t, triple, common_seed, rng);
    tr.gamma_bin = aux.gamma;
    tr.k = aux.k;
    tr.max_quotient_aux = aux.max_quotient;
    tr.len_k = GolombLength(tr.tau_aux, aux.k);
  } else {
    // The accepted item and its index are independent, with the item
    // distributed as the target.
    const AuxEntry& entry = Aux(t, triple);
    tr.gamma_bin = entry.bins[entry.target.Sample(rng.NextWord())];
    tr.len_k = SampleGolombLength(tr.tau_aux, rng);
  }

  tr.tau = PrimaryCeiling(tr.gamma_bin, triple);
  const long double cost =
      singular_ ? tr.tau / model_->marginal().Prob(tr.gamma_bin) : tr.tau;
  if (cost <= cfg_.scan_limit) {
    const PrimaryOutcome primary =
        RunPrimary(x, t, tr.gamma_bin, triple, common_seed, rng);
    tr.j = primary.j;
    tr.max_quotient_primary = primary.max_quotient;
    tr.len_j = GolombLength(tr.tau, primary.j);
  } else {
    tr.len_j = SampleGolombLength(tr.tau, rng);
  }
  return tr;
}

EncodeResult SynthScheme::BaselineEncode(std::span<const int> x,
                                         std::uint64_t common_seed,
                                         std::uint64_t private_seed) const {
  CheckInput(x);
  PrivateRng rng(private_seed);
  const LlrCategories& cats = model_->categories();
  const CounterStream stream(common_seed, kBaselineKey);
  auto r = RejectionSample(
      [&](std::uint64_t i) {
        std::vector<int> y;
        OutputItem(stream, i, y);
        return y;
      },
      [&](const std::vector<int>& y) -> Real {
        const auto sum = BlockSum(cats, x, y);
        return sum ? std::exp2(*sum) : 0.0L;
      },
      baseline_ceiling_, [&] { return rng.Uniform(); }, {cfg_.iteration_limit});
  EncodeResult out;
  out.trace.delta = cfg_.q.delta();
  out.trace.tau = baseline_ceiling_;
  out.trace.j = r.index;
  out.trace.max_quotient_primary = r.max_quotient;
  out.trace.singular = singular_;
  out.trace.proposal = "baseline p(y^n)";
  BitWriter w;
  WriteGolomb(baseline_ceiling_, r.index, w);
  out.transcript.len_j = w.size();
  out.trace.len_j = w.size();
  out.transcript.bits = w.Finish();
  out.y = std::move(r.item);
  return out;
}

std::vector<int> SynthScheme::BaselineDecode(const BitString& bits,
                                             std::uint64_t common_seed,
                                             std::uint64_t index_offset) const {
  BitReader r(bits);
  const std::uint64_t j =
      GolombCode(GolombParamForCeiling(baseline_ceiling_)).Decode(r) +
      index_offset;
  if (!r.AtEnd()) {
    throw Error(ErrorCode::kMalformedBitstream, "trailing bits after transcript");
  }
  std::vector<int> y;
  OutputItem(CounterStream(common_seed, kBaselineKey), j, y);
  return y;
}

SchemeTrace SynthScheme::BaselineSimulate(std::span<const int> x,
                                          std::uint64_t common_seed,
                                          std::uint64_t private_seed) const {
  if (baseline_ceiling_ <= cfg_.scan_limit) {
    return BaselineEncode(x, common_seed, private_seed).trace;
  }
  CheckInput(x);
  PrivateRng rng(private_seed);
  SchemeTrace tr;
  tr.delta = cfg_.q.delta();
  tr.tau = baseline_ceiling_;
  tr.singular = singular_;
  tr.proposal = "baseline p(y^n)";
  tr.len_j = SampleGolombLength(baseline_ceiling_, rng);
  return tr;
}

}  // namespace chansynth
