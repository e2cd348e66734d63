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

#ifndef CHANSYNTH_SCHEME_H_
#define CHANSYNTH_SCHEME_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chansynth/bitstream.h"
#include "chansynth/counter_stream.h"
#include "chansynth/dmc.h"
#include "chansynth/huffman.h"
#include "chansynth/llr_dist.h"
#include "chansynth/rejection.h"

namespace chansynth {

enum class SchemeMode { kAuto, kForceSingular, kForceNonsingular };

std::string_view SchemeModeName(SchemeMode mode);
// Accepts "auto", "force-singular", "force-nonsingular".
SchemeMode ParseSchemeMode(std::string_view name);

// Ceilings up to this value are sampled literally in Simulate; larger ones
// draw the index codeword length from its exact law instead.
inline constexpr long double kDefaultScanLimit = 65536.0L;

struct SchemeConfig {
  Dmc dmc;
  int n = 1;
  Quantizer q{0.5L};
  SchemeMode mode = SchemeMode::kAuto;
  std::uint64_t seed = 0;
  std::uint64_t iteration_limit = kDefaultIterationLimit;
  long double scan_limit = kDefaultScanLimit;
};

struct Transcript {
  BitString bits;
  std::size_t len_triple = 0;
  std::size_t len_k = 0;
  std::size_t len_j = 0;

  std::size_t total() const { return len_triple + len_k + len_j; }
};

struct SchemeTrace {
  std::int64_t gamma_bin = 0;
  Real delta = 0.5L;
  BarTriple triple;
  long double tau_aux = 0.0L;
  long double tau = 0.0L;
  // 0 when the index was not materialized (its codeword length was drawn
  // from the exact length law).
  std::uint64_t k = 0;
  std::uint64_t j = 0;
  std::uint64_t len_triple = 0;
  std::uint64_t len_k = 0;
  std::uint64_t len_j = 0;
  bool singular = false;
  std::string proposal;
  // Largest ratio / ceiling over the scanned codebook prefixes.
  long double max_quotient_aux = 0.0L;
  long double max_quotient_primary = 0.0L;

  std::uint64_t total_bits() const { return len_triple + len_k + len_j; }
};

std::string TraceToJson(const SchemeTrace& trace);

struct EncodeResult {
  Transcript transcript;
  SchemeTrace trace;
  std::vector<int> y;
};

// Golomb parameter for an index with ceiling tau (success probability
// 1/tau); tau <= 1 maps to m = 1.
std::uint64_t GolombParamForCeiling(long double tau);

class SynthScheme;

// Draws from p_{Y^n} restricted to outputs whose LLR bin equals gamma, for
// singular distributions. Item j is the j-th matching draw of the raw
// p_{Y^n} stream keyed by the bin.
class ConditionalProposalSampler {
 public:
  ConditionalProposalSampler(const SynthScheme& scheme, std::uint64_t seed,
                             std::int64_t gamma);

  // Sequential access is O(1) amortized; going backwards rescans.
  const std::vector<int>& Item(std::uint64_t j);
  std::uint64_t raw_draws() const { return raw_; }

 private:
  const SynthScheme& scheme_;
  CounterStream stream_;
  std::int64_t gamma_;
  std::uint64_t accepted_ = 0;
  std::uint64_t raw_ = 0;
  std::vector<int> current_;
};

class SynthScheme {
 public:
  // Throws kPrecondition when force-singular is requested for a nonsingular
  // channel, and propagates llr_dist errors.
  explicit SynthScheme(SchemeConfig cfg);

  const SchemeConfig& config() const { return cfg_; }
  const LlrModel& model() const { return *model_; }
  bool singular() const { return singular_; }
  int n() const { return cfg_.n; }

  EncodeResult Encode(std::span<const int> x, std::uint64_t private_seed) const {
    return Encode(x, cfg_.seed, private_seed);
  }
  EncodeResult Encode(std::span<const int> x, std::uint64_t common_seed,
                      std::uint64_t private_seed) const;

  // `index_offset` is added to the decoded primary index (negative-control
  // hook; 0 in normal operation).
  std::vector<int> Decode(const BitString& bits) const {
    return Decode(bits, cfg_.seed);
  }
  std::vector<int> Decode(const BitString& bits, std::uint64_t common_seed,
                          std::uint64_t index_offset = 0) const;

  // Rate-only run: identical law for the side information and all segment
  // lengths as Encode, but ceilings above the scan limit skip the codebook
  // scan (K or J is then reported as 0).
  SchemeTrace Simulate(std::span<const int> x, std::uint64_t common_seed,
                       std::uint64_t private_seed) const;

  // Target / proposal likelihood ratio of the primary stage.
  Real PrimaryLr(std::span<const int> x, std::int64_t gamma,
                 std::span<const int> y) const;
  long double AuxCeiling(const BarTriple& triple) const;
  long double PrimaryCeiling(std::int64_t gamma, const BarTriple& triple) const;

  // LLR bin of (x, y), and for singular distributions the bin of y alone.
  std::int64_t BlockBin(std::span<const int> x, std::span<const int> y) const;
  std::int64_t OutputBin(std::span<const int> y) const;
  // p_{Y^n} codebook item `index` of `stream` (n symbols).
  void OutputItem(const CounterStream& stream, std::uint64_t index,
                  std::vector<int>& y) const;

  const KeyedHuffman<BarTriple>& triple_code() const { return triple_code_; }
  std::size_t TypeIndexOf(std::span<const int> x) const;

  // One-stage comparison scheme over the p_{Y^n} codebook keyed "baseline".
  long double BaselineCeiling() const { return baseline_ceiling_; }
  EncodeResult BaselineEncode(std::span<const int> x, std::uint64_t common_seed,
                              std::uint64_t private_seed) const;
  std::vector<int> BaselineDecode(const BitString& bits,
                                  std::uint64_t common_seed,
                                  std::uint64_t index_offset = 0) const;
  SchemeTrace BaselineSimulate(std::span<const int> x, std::uint64_t common_seed,
                               std::uint64_t private_seed) const;

 private:
  friend class ConditionalProposalSampler;

  struct AuxEntry {
    std::vector<Real> ratio;            // over marginal atoms
    std::vector<std::int64_t> bins;     // support of p(gamma | t, g1, g2)
    DiscreteSampler target;
  };
  struct Ghost {
    std::vector<std::int64_t> bins;
    DiscreteSampler sampler;
  };
  struct AuxOutcome {
    std::int64_t gamma = 0;
    std::uint64_t k = 0;
    long double max_quotient = 0.0L;
  };
  struct PrimaryOutcome {
    std::vector<int> y;
    std::uint64_t j = 0;
    long double max_quotient = 0.0L;
  };

  const AuxEntry& Aux(std::size_t t, const BarTriple& triple) const;
  AuxOutcome RunAux(std::size_t t, const BarTriple& triple,
                    std::uint64_t common_seed, PrivateRng& rng) const;
  PrimaryOutcome RunPrimary(std::span<const int> x, std::size_t t,
                            std::int64_t gamma, const BarTriple& triple,
                            std::uint64_t common_seed, PrivateRng& rng) const;
  std::int64_t AuxItem(std::uint64_t common_seed, std::uint64_t k) const;
  std::vector<int> PrimaryItem(std::uint64_t common_seed, std::int64_t gamma,
                               std::uint64_t j) const;
  static std::string PrimaryKey(std::int64_t gamma);
  void CheckInput(std::span<const int> x) const;
  Real Value(std::int64_t index) const {
    return static_cast<Real>(index) * cfg_.q.delta();
  }

  SchemeConfig cfg_;
  std::unique_ptr<LlrModel> model_;
  bool singular_ = false;
  KeyedHuffman<BarTriple> triple_code_;
  std::vector<std::int64_t> marginal_bins_;
  DiscreteSampler marginal_sampler_;
  DiscreteSampler output_sampler_;
  std::vector<Ghost> ghosts_;
  std::vector<std::map<BarTriple, AuxEntry>> aux_;
  long double baseline_ceiling_ = 1.0L;
};

}  // namespace chansynth

#endif  // CHANSYNTH_SCHEME_H_
