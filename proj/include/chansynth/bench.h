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

#ifndef CHANSYNTH_BENCH_H_
#define CHANSYNTH_BENCH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "chansynth/dmc.h"
#include "chansynth/scheme.h"

namespace chansynth {

enum class SchemeSelector { kTwoStage, kBaseline, kBoth };
enum class OutputFormat { kCsv, kJson };

std::string_view SchemeSelectorName(SchemeSelector s);
SchemeSelector ParseSchemeSelector(std::string_view name);
OutputFormat ParseOutputFormat(std::string_view name);

inline constexpr std::uint64_t kMaxExactnessCells = 10000;

struct ExperimentConfig {
  std::vector<int> ns{1};
  Real delta = 0.5L;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  SchemeSelector scheme = SchemeSelector::kTwoStage;
  SchemeMode mode = SchemeMode::kAuto;
  double significance = 0.001;
  // 0 selects the hardware concurrency.
  unsigned threads = 0;
  long double scan_limit = kDefaultScanLimit;
  // Negative control: the decoder reads codebook entry J + 1.
  bool corrupt_decoder = false;
};

// Throws kPrecondition for an empty n list, trials == 0 or a significance
// level outside (0, 1).
void ValidateConfig(const ExperimentConfig& cfg);

// Source sequence and seeds used by trial `trial` of a run.
struct TrialSeeds {
  std::uint64_t common;
  std::uint64_t encoder;
  std::uint64_t source;
};
TrialSeeds SeedsFor(std::uint64_t master, int n, std::uint64_t trial,
                    std::string_view tag);
std::vector<int> DrawSource(const Dmc& dmc, int n, std::uint64_t source_seed);

struct ExactnessRow {
  int n = 0;
  std::string scheme;
  std::uint64_t trials = 0;
  std::uint64_t cells = 0;
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 0.0;
  std::uint64_t mismatches = 0;          // decoder output != encoder output
  std::uint64_t ceiling_violations = 0;
  double max_quotient = 0.0;
  bool pass = false;
};

struct ExactnessReport {
  std::vector<ExactnessRow> rows;
  bool pass = true;
};

// Exact joint law of (X^n, Y^n) over cells x * |Y|^n + y with sequences read
// as base-|X| and base-|Y| numbers (first symbol most significant).
std::vector<Real> ExactJoint(const Dmc& dmc, int n);

// Throws kCellCountTooLarge if |X|^n |Y|^n exceeds 10^4.
ExactnessReport RunExactness(const Dmc& dmc, const ExperimentConfig& cfg);

struct RateRow {
  int n = 0;
  std::uint64_t trials = 0;
  double mean_rate = 0.0;  // bits per symbol
  double stderr_rate = 0.0;
  double mi = 0.0;
  double h_gamma_over_n = 0.0;
  double bound = 0.0;      // per symbol
  double redundancy = 0.0;
  std::string scheme;
  bool singular = false;
  double mean_bits = 0.0;
  double mean_len_triple = 0.0;
  double mean_len_k = 0.0;
  double mean_len_j = 0.0;
  double literal_k_fraction = 0.0;
  double literal_j_fraction = 0.0;
  double max_quotient = 0.0;
  std::uint64_t ceiling_violations = 0;

  bool operator==(const RateRow&) const = default;
};

struct RedundancyFit {
  std::string scheme;
  // redundancy ~ c * log2(n)/n + b/n
  double c = 0.0;
  double b = 0.0;
  bool operator==(const RedundancyFit&) const = default;
};

struct RateReport {
  std::vector<RateRow> rows;
  std::vector<RedundancyFit> fits;
  bool pass = true;  // every row: mean_rate <= bound + 3 stderr
  bool operator==(const RateReport&) const = default;
};

// Two-stage bound per symbol: I + ([H(Gamma)] + 2 H(triple) + 7 delta + 3 +
// 2 log2 e) / n, with H(Gamma) only for the nonsingular construction.
double TwoStageBound(const LlrModel& model, bool singular);
// Baseline bound per symbol: (log2 M + log2 e + 1) / n.
double BaselineBound(const SynthScheme& scheme);

RateReport RunRateSweep(const Dmc& dmc, const ExperimentConfig& cfg);

struct EntropyRow {
  int n = 0;
  double h_gamma = 0.0;
  double h_gamma_bound = 0.0;  // max-entropy bound from the LLR variance
  double h_g1 = 0.0;
  double h_g2 = 0.0;
  double h_gg = 0.0;
  double h_triple = 0.0;
  double g_bound = 0.0;        // log2(H(Gamma) + delta/2) + log2 e
  double gg_bound = 0.0;       // log2(H(g1) + H(g2) + delta/2) + log2 e
  bool holds = false;
};

struct EntropyReport {
  std::vector<EntropyRow> rows;
  // Least-squares slope of H(Gamma) against log2 n (NaN with < 2 rows).
  double slope = 0.0;
  double intercept = 0.0;
  bool pass = true;
};

EntropyReport RunEntropyCheck(const Dmc& dmc, const ExperimentConfig& cfg);

std::string FormatNumber(double v);

std::string ExactnessToCsv(const ExactnessReport& r);
std::string ExactnessToJson(const ExactnessReport& r);
std::string RateToCsv(const RateReport& r);
std::string RateToJson(const RateReport& r);
RateReport RateFromJson(std::string_view text);
std::string EntropyToCsv(const EntropyReport& r);
std::string EntropyToJson(const EntropyReport& r);

// Writes text to path. Throws kIoError.
void WriteFile(const std::filesystem::path& path, std::string_view text);

}  // namespace chansynth

#endif  // CHANSYNTH_BENCH_H_
