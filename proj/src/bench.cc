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

#include "chansynth/bench.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include "chansynth/error.h"
#include "chansynth/stats.h"
#include "json.hpp"

namespace chansynth {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kTwoStageTag = "two-stage";
constexpr std::string_view kBaselineTag = "baseline";

std::vector<std::string_view> SchemesFor(SchemeSelector s) {
  switch (s) {
    case SchemeSelector::kTwoStage:
      return {kTwoStageTag};
    case SchemeSelector::kBaseline:
      return {kBaselineTag};
    case SchemeSelector::kBoth:
      return {kTwoStageTag, kBaselineTag};
  }
  return {};
}

unsigned ThreadCount(const ExperimentConfig& cfg, std::uint64_t trials) {
  unsigned t = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
  if (t == 0) t = 1;
  if (trials < t) t = static_cast<unsigned>(std::max<std::uint64_t>(trials, 1));
  return t;
}

// Runs fn(state, trial) for trial in [0, trials) on contiguous chunks, one
// state per worker. Callers combine the states with order-independent sums.
template <typename State, typename Fn>
std::vector<State> ParallelTrials(std::uint64_t trials, unsigned threads,
                                  const State& init, Fn fn) {
  std::vector<State> states(threads, init);
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned w) {
    const std::uint64_t begin = trials * w / threads;
    const std::uint64_t end = trials * (w + 1) / threads;
    try {
      for (std::uint64_t i = begin; i < end; ++i) fn(states[w], i);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (std::thread& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return states;
}

std::uint64_t IntPow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > kMaxExactnessCells * 16 / std::max<std::uint64_t>(base, 1)) {
      return kMaxExactnessCells * 16;
    }
    r *= base;
  }
  return r;
}

std::uint64_t SequenceIndex(std::span<const int> s, std::size_t alphabet) {
  std::uint64_t v = 0;
  for (int a : s) v = v * alphabet + static_cast<std::uint64_t>(a);
  return v;
}

SchemeConfig MakeSchemeConfig(const Dmc& dmc, int n,
                              const ExperimentConfig& cfg) {
  SchemeConfig sc{dmc};
  sc.n = n;
  sc.q = Quantizer(cfg.delta);
  sc.mode = cfg.mode;
  sc.scan_limit = cfg.scan_limit;
  return sc;
}

double Round12(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(FormatNumber(v).c_str(), nullptr);
}

}  // namespace

std::string_view SchemeSelectorName(SchemeSelector s) {
  switch (s) {
    case SchemeSelector::kTwoStage:
      return "two-stage";
    case SchemeSelector::kBaseline:
      return "baseline";
    case SchemeSelector::kBoth:
      return "both";
  }
  return "two-stage";
}

SchemeSelector ParseSchemeSelector(std::string_view name) {
  if (name == "two-stage") return SchemeSelector::kTwoStage;
  if (name == "baseline") return SchemeSelector::kBaseline;
  if (name == "both") return SchemeSelector::kBoth;
  throw Error(ErrorCode::kParseError, "unknown scheme: " + std::string(name));
}

OutputFormat ParseOutputFormat(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw Error(ErrorCode::kParseError, "unknown format: " + std::string(name));
}

void ValidateConfig(const ExperimentConfig& cfg) {
  if (cfg.ns.empty()) throw Error(ErrorCode::kPrecondition, "empty n list");
  for (int n : cfg.ns) {
    if (n < 1) throw Error(ErrorCode::kPrecondition, "n must be >= 1");
  }
  if (cfg.trials == 0) throw Error(ErrorCode::kPrecondition, "trials must be >= 1");
  if (!(cfg.significance > 0.0 && cfg.significance < 1.0)) {
    throw Error(ErrorCode::kPrecondition, "significance must lie in (0, 1)");
  }
  Quantizer q(cfg.delta);
  (void)q;
}

TrialSeeds SeedsFor(std::uint64_t master, int n, std::uint64_t trial,
                    std::string_view tag) {
  const std::uint64_t base = DeriveSeed(
      {master, static_cast<std::uint64_t>(n), trial, Fnv1a64(tag)});
  return {DeriveSeed({base, 0}), DeriveSeed({base, 1}), DeriveSeed({base, 2})};
}

std::vector<int> DrawSource(const Dmc& dmc, int n, std::uint64_t source_seed) {
  const DiscreteSampler sampler(dmc.input_law());
  PrivateRng rng(source_seed, "source");
  std::vector<int> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[i] = static_cast<int>(sampler.Sample(rng.NextWord()));
  return x;
}

std::vector<Real> ExactJoint(const Dmc& dmc, int n) {
  const std::uint64_t nx = IntPow(dmc.x_size(), n);
  const std::uint64_t ny = IntPow(dmc.y_size(), n);
  std::vector<Real> p(nx * ny, 0.0L);
  std::vector<int> x(n), y(n);
  for (std::uint64_t xi = 0; xi < nx; ++xi) {
    std::uint64_t v = xi;
    for (int i = n - 1; i >= 0; --i) {
      x[i] = static_cast<int>(v % dmc.x_size());
      v /= dmc.x_size();
    }
    Real px = 1.0L;
    for (int a : x) px *= dmc.px(a);
    for (std::uint64_t yi = 0; yi < ny; ++yi) {
      std::uint64_t w = yi;
      Real pr = px;
      for (int i = n - 1; i >= 0; --i) {
        pr *= dmc.pyx(x[i], w % dmc.y_size());
        w /= dmc.y_size();
      }
      p[xi * ny + yi] = pr;
    }
  }
  return p;
}

ExactnessReport RunExactness(const Dmc& dmc, const ExperimentConfig& cfg) {
  ValidateConfig(cfg);
  ExactnessReport report;
  for (int n : cfg.ns) {
    const std::uint64_t nx = IntPow(dmc.x_size(), n);
    const std::uint64_t ny = IntPow(dmc.y_size(), n);
    if (nx * ny > kMaxExactnessCells) {
      throw Error(ErrorCode::kCellCountTooLarge,
                  "joint table has more than 10^4 cells at n=" +
                      std::to_string(n));
    }
    const std::vector<Real> joint = ExactJoint(dmc, n);
    const SynthScheme scheme(MakeSchemeConfig(dmc, n, cfg));
    const std::uint64_t offset = cfg.corrupt_decoder ? 1 : 0;

    for (std::string_view tag : SchemesFor(cfg.scheme)) {
      const bool two_stage = tag == kTwoStageTag;
      struct State {
        std::vector<std::uint64_t> hist;
        std::uint64_t mismatches = 0;
        std::uint64_t violations = 0;
        double max_quotient = 0.0;
      };
      State init;
      init.hist.assign(joint.size(), 0);
      auto states = ParallelTrials(
          cfg.trials, ThreadCount(cfg, cfg.trials), init,
          [&](State& s, std::uint64_t trial) {
            const TrialSeeds seeds = SeedsFor(cfg.seed, n, trial, tag);
            const std::vector<int> x = DrawSource(dmc, n, seeds.source);
            try {
              const EncodeResult r =
                  two_stage ? scheme.Encode(x, seeds.common, seeds.encoder)
                            : scheme.BaselineEncode(x, seeds.common, seeds.encoder);
              const std::vector<int> y =
                  two_stage
                      ? scheme.Decode(r.transcript.bits, seeds.common, offset)
                      : scheme.BaselineDecode(r.transcript.bits, seeds.common,
                                              offset);
              if (y != r.y) ++s.mismatches;
              ++s.hist[SequenceIndex(x, dmc.x_size()) * ny +
                       SequenceIndex(y, dmc.y_size())];
              s.max_quotient = std::max<double>(
                  s.max_quotient, std::max(r.trace.max_quotient_aux,
                                           r.trace.max_quotient_primary));
            } catch (const Error& e) {
              if (e.code() != ErrorCode::kCeilingViolation) throw;
              ++s.violations;
            }
          });
      ExactnessRow row;
      row.n = n;
      row.scheme = std::string(tag);
      row.trials = cfg.trials;
      row.cells = joint.size();
      std::vector<std::uint64_t> hist(joint.size(), 0);
      for (const State& s : states) {
        for (std::size_t c = 0; c < hist.size(); ++c) hist[c] += s.hist[c];
        row.mismatches += s.mismatches;
        row.ceiling_violations += s.violations;
        row.max_quotient = std::max(row.max_quotient, s.max_quotient);
      }
      const ChiSquareResult gof = ChiSquareGof(hist, joint);
      row.chi2 = gof.statistic;
      row.dof = gof.dof;
      row.p_value = gof.p_value;
      row.pass = gof.p_value > cfg.significance && row.mismatches == 0 &&
                 row.ceiling_violations == 0;
      report.pass = report.pass && row.pass;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

double TwoStageBound(const LlrModel& model, bool singular) {
  const SideInfoEntropies h = model.Entropies();
  const long double delta = model.quantizer().delta();
  long double extra = 2.0L * h.h_triple + 7.0L * delta + 3.0L +
                      2.0L * std::numbers::log2e_v<long double>;
  if (!singular) extra += h.h_gamma;
  return static_cast<double>(MutualInformation(model.dmc()) +
                             extra / static_cast<long double>(model.n()));
}

double BaselineBound(const SynthScheme& scheme) {
  return static_cast<double>(
      (std::log2(scheme.BaselineCeiling()) +
       std::numbers::log2e_v<long double> + 1.0L) /
      static_cast<long double>(scheme.n()));
}

RateReport RunRateSweep(const Dmc& dmc, const ExperimentConfig& cfg) {
  ValidateConfig(cfg);
  RateReport report;
  const double mi = static_cast<double>(MutualInformation(dmc));
  for (int n : cfg.ns) {
    const SynthScheme scheme(MakeSchemeConfig(dmc, n, cfg));
    const SideInfoEntropies h = scheme.model().Entropies();
    for (std::string_view tag : SchemesFor(cfg.scheme)) {
      const bool two_stage = tag == kTwoStageTag;
      struct State {
        std::uint64_t bits = 0;
        std::uint64_t bits_sq = 0;
        std::uint64_t triple = 0;
        std::uint64_t k = 0;
        std::uint64_t j = 0;
        std::uint64_t literal_k = 0;
        std::uint64_t literal_j = 0;
        std::uint64_t violations = 0;
        double max_quotient = 0.0;
      };
      auto states = ParallelTrials(
          cfg.trials, ThreadCount(cfg, cfg.trials), State{},
          [&](State& s, std::uint64_t trial) {
            const TrialSeeds seeds = SeedsFor(cfg.seed, n, trial, tag);
            const std::vector<int> x = DrawSource(dmc, n, seeds.source);
            try {
              const SchemeTrace tr =
                  two_stage
                      ? scheme.Simulate(x, seeds.common, seeds.encoder)
                      : scheme.BaselineSimulate(x, seeds.common, seeds.encoder);
              const std::uint64_t b = tr.total_bits();
              s.bits += b;
              s.bits_sq += b * b;
              s.triple += tr.len_triple;
              s.k += tr.len_k;
              s.j += tr.len_j;
              s.literal_k += tr.k != 0;
              s.literal_j += tr.j != 0;
              s.max_quotient = std::max<double>(
                  s.max_quotient,
                  std::max(tr.max_quotient_aux, tr.max_quotient_primary));
            } catch (const Error& e) {
              if (e.code() != ErrorCode::kCeilingViolation) throw;
              ++s.violations;
            }
          });
      State total;
      for (const State& s : states) {
        total.bits += s.bits;
        total.bits_sq += s.bits_sq;
        total.triple += s.triple;
        total.k += s.k;
        total.j += s.j;
        total.literal_k += s.literal_k;
        total.literal_j += s.literal_j;
        total.violations += s.violations;
        total.max_quotient = std::max(total.max_quotient, s.max_quotient);
      }
      const long double t = static_cast<long double>(cfg.trials);
      const long double dn = static_cast<long double>(n);
      const long double mean = static_cast<long double>(total.bits) / t;
      long double var = 0.0L;
      if (cfg.trials > 1) {
        var = (static_cast<long double>(total.bits_sq) - t * mean * mean) /
              (t - 1.0L);
        if (var < 0.0L) var = 0.0L;
      }
      RateRow row;
      row.n = n;
      row.trials = cfg.trials;
      row.mean_rate = static_cast<double>(mean / dn);
      row.stderr_rate = static_cast<double>(std::sqrt(var / t) / dn);
      row.mi = mi;
      row.h_gamma_over_n = static_cast<double>(h.h_gamma / dn);
      row.bound = two_stage ? TwoStageBound(scheme.model(), scheme.singular())
                            : BaselineBound(scheme);
      row.redundancy = row.mean_rate - row.mi;
      row.scheme = std::string(tag);
      row.singular = scheme.singular();
      row.mean_bits = static_cast<double>(mean);
      row.mean_len_triple = static_cast<double>(total.triple / t);
      row.mean_len_k = static_cast<double>(total.k / t);
      row.mean_len_j = static_cast<double>(total.j / t);
      row.literal_k_fraction = static_cast<double>(total.literal_k / t);
      row.literal_j_fraction = static_cast<double>(total.literal_j / t);
      row.max_quotient = total.max_quotient;
      row.ceiling_violations = total.violations;
      report.pass = report.pass &&
                    row.mean_rate <= row.bound + 3.0 * row.stderr_rate &&
                    row.ceiling_violations == 0;
      report.rows.push_back(std::move(row));
    }
  }
  for (std::string_view tag : SchemesFor(cfg.scheme)) {
    std::vector<double> x1, x2, y;
    for (const RateRow& r : report.rows) {
      if (r.scheme != tag) continue;
      x1.push_back(std::log2(static_cast<double>(r.n)) / r.n);
      x2.push_back(1.0 / r.n);
      y.push_back(r.redundancy);
    }
    std::vector<double> distinct = x2;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 2) continue;
    const TwoFit f = FitTwo(x1, x2, y);
    report.fits.push_back({std::string(tag), f.c1, f.c2});
  }
  return report;
}

EntropyReport RunEntropyCheck(const Dmc& dmc, const ExperimentConfig& cfg) {
  ValidateConfig(cfg);
  EntropyReport report;
  const long double delta = cfg.delta;
  const long double sigma = std::sqrt(LlrSigma2(dmc));
  const long double log2e = std::numbers::log2e_v<long double>;
  const long double two_pi_e =
      2.0L * std::numbers::pi_v<long double> * std::numbers::e_v<long double>;
  // A deterministic variable meets any entropy bound; the bound expressions
  // themselves can dip below zero at small H(Gamma).
  auto within = [](long double h, long double bound) {
    return h <= bound + 1e-9L || h <= 1e-12L;
  };
  for (int n : cfg.ns) {
    const LlrModel model(dmc, Quantizer(cfg.delta), n);
    const SideInfoEntropies h = model.Entropies();
    EntropyRow row;
    row.n = n;
    row.h_gamma = static_cast<double>(h.h_gamma);
    const long double spread = 1.0L + std::sqrt(static_cast<long double>(n)) *
                                          sigma / delta;
    const long double hb =
        0.5L * std::log2(two_pi_e * spread * spread + two_pi_e / 12.0L);
    row.h_gamma_bound = static_cast<double>(hb);
    row.h_g1 = static_cast<double>(h.h_g1);
    row.h_g2 = static_cast<double>(h.h_g2);
    row.h_gg = static_cast<double>(h.h_gg);
    row.h_triple = static_cast<double>(h.h_triple);
    const long double gb = std::log2(h.h_gamma + delta / 2.0L) + log2e;
    const long double ggb = std::log2(h.h_g1 + h.h_g2 + delta / 2.0L) + log2e;
    row.g_bound = static_cast<double>(gb);
    row.gg_bound = static_cast<double>(ggb);
    row.holds = within(h.h_gamma, hb) && within(h.h_g1, gb) &&
                within(h.h_g2, gb) && within(h.h_gg, ggb);
    report.pass = report.pass && row.holds;
    report.rows.push_back(row);
  }
  std::vector<double> lx, hy;
  for (const EntropyRow& r : report.rows) {
    lx.push_back(std::log2(static_cast<double>(r.n)));
    hy.push_back(r.h_gamma);
  }
  std::vector<double> distinct = lx;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() >= 2) {
    const LineFit f = FitLine(lx, hy);
    report.slope = f.slope;
    report.intercept = f.intercept;
  } else {
    report.slope = report.intercept = std::nan("");
  }
  return report;
}

std::string FormatNumber(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string ExactnessToCsv(const ExactnessReport& r) {
  std::ostringstream os;
  os << "n,scheme,trials,cells,chi2,dof,p_value,mismatches,ceiling_violations,"
        "max_quotient,pass\n";
  for (const ExactnessRow& row : r.rows) {
    os << row.n << ',' << row.scheme << ',' << row.trials << ',' << row.cells
       << ',' << FormatNumber(row.chi2) << ',' << row.dof << ','
       << FormatNumber(row.p_value) << ',' << row.mismatches << ','
       << row.ceiling_violations << ',' << FormatNumber(row.max_quotient) << ','
       << (row.pass ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string ExactnessToJson(const ExactnessReport& r) {
  Json j;
  j["pass"] = r.pass;
  j["rows"] = Json::array();
  for (const ExactnessRow& row : r.rows) {
    j["rows"].push_back({{"n", row.n},
                         {"scheme", row.scheme},
                         {"trials", row.trials},
                         {"cells", row.cells},
                         {"chi2", Round12(row.chi2)},
                         {"dof", row.dof},
                         {"p_value", Round12(row.p_value)},
                         {"mismatches", row.mismatches},
                         {"ceiling_violations", row.ceiling_violations},
                         {"max_quotient", Round12(row.max_quotient)},
                         {"pass", row.pass}});
  }
  return j.dump(2) + "\n";
}

std::string RateToCsv(const RateReport& r) {
  std::ostringstream os;
  os << "n,trials,mean_rate,stderr,mi,h_gamma_over_n,bound,redundancy,scheme,"
        "singular,mean_bits,mean_len_triple,mean_len_k,mean_len_j,"
        "literal_k_fraction,literal_j_fraction,max_quotient,"
        "ceiling_violations\n";
  for (const RateRow& row : r.rows) {
    os << row.n << ',' << row.trials << ',' << FormatNumber(row.mean_rate) << ','
       << FormatNumber(row.stderr_rate) << ',' << FormatNumber(row.mi) << ','
       << FormatNumber(row.h_gamma_over_n) << ',' << FormatNumber(row.bound)
       << ',' << FormatNumber(row.redundancy) << ',' << row.scheme << ','
       << (row.singular ? 1 : 0) << ',' << FormatNumber(row.mean_bits) << ','
       << FormatNumber(row.mean_len_triple) << ','
       << FormatNumber(row.mean_len_k) << ',' << FormatNumber(row.mean_len_j)
       << ',' << FormatNumber(row.literal_k_fraction) << ','
       << FormatNumber(row.literal_j_fraction) << ','
       << FormatNumber(row.max_quotient) << ',' << row.ceiling_violations
       << '\n';
  }
  return os.str();
}

std::string RateToJson(const RateReport& r) {
  Json j;
  j["pass"] = r.pass;
  j["rows"] = Json::array();
  for (const RateRow& row : r.rows) {
    j["rows"].push_back({{"n", row.n},
                         {"trials", row.trials},
                         {"mean_rate", Round12(row.mean_rate)},
                         {"stderr", Round12(row.stderr_rate)},
                         {"mi", Round12(row.mi)},
                         {"h_gamma_over_n", Round12(row.h_gamma_over_n)},
                         {"bound", Round12(row.bound)},
                         {"redundancy", Round12(row.redundancy)},
                         {"scheme", row.scheme},
                         {"singular", row.singular},
                         {"mean_bits", Round12(row.mean_bits)},
                         {"mean_len_triple", Round12(row.mean_len_triple)},
                         {"mean_len_k", Round12(row.mean_len_k)},
                         {"mean_len_j", Round12(row.mean_len_j)},
                         {"literal_k_fraction", Round12(row.literal_k_fraction)},
                         {"literal_j_fraction", Round12(row.literal_j_fraction)},
                         {"max_quotient", Round12(row.max_quotient)},
                         {"ceiling_violations", row.ceiling_violations}});
  }
  j["fits"] = Json::array();
  for (const RedundancyFit& f : r.fits) {
    j["fits"].push_back(
        {{"scheme", f.scheme}, {"c", Round12(f.c)}, {"b", Round12(f.b)}});
  }
  return j.dump(2) + "\n";
}

RateReport RateFromJson(std::string_view text) {
  RateReport r;
  try {
    const Json j = Json::parse(text);
    r.pass = j.at("pass").get<bool>();
    for (const Json& row : j.at("rows")) {
      RateRow x;
      x.n = row.at("n").get<int>();
      x.trials = row.at("trials").get<std::uint64_t>();
      x.mean_rate = row.at("mean_rate").get<double>();
      x.stderr_rate = row.at("stderr").get<double>();
      x.mi = row.at("mi").get<double>();
      x.h_gamma_over_n = row.at("h_gamma_over_n").get<double>();
      x.bound = row.at("bound").get<double>();
      x.redundancy = row.at("redundancy").get<double>();
      x.scheme = row.at("scheme").get<std::string>();
      x.singular = row.at("singular").get<bool>();
      x.mean_bits = row.at("mean_bits").get<double>();
      x.mean_len_triple = row.at("mean_len_triple").get<double>();
      x.mean_len_k = row.at("mean_len_k").get<double>();
      x.mean_len_j = row.at("mean_len_j").get<double>();
      x.literal_k_fraction = row.at("literal_k_fraction").get<double>();
      x.literal_j_fraction = row.at("literal_j_fraction").get<double>();
      x.max_quotient = row.at("max_quotient").get<double>();
      x.ceiling_violations = row.at("ceiling_violations").get<std::uint64_t>();
      r.rows.push_back(std::move(x));
    }
    for (const Json& f : j.at("fits")) {
      r.fits.push_back({f.at("scheme").get<std::string>(),
                        f.at("c").get<double>(), f.at("b").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return r;
}

std::string EntropyToCsv(const EntropyReport& r) {
  std::ostringstream os;
  os << "n,h_gamma,h_gamma_bound,h_g1,h_g2,h_gg,h_triple,g_bound,gg_bound,"
        "holds\n";
  for (const EntropyRow& row : r.rows) {
    os << row.n << ',' << FormatNumber(row.h_gamma) << ','
       << FormatNumber(row.h_gamma_bound) << ',' << FormatNumber(row.h_g1) << ','
       << FormatNumber(row.h_g2) << ',' << FormatNumber(row.h_gg) << ','
       << FormatNumber(row.h_triple) << ',' << FormatNumber(row.g_bound) << ','
       << FormatNumber(row.gg_bound) << ',' << (row.holds ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string EntropyToJson(const EntropyReport& r) {
  Json j;
  j["pass"] = r.pass;
  j["slope"] = Round12(r.slope);
  j["intercept"] = Round12(r.intercept);
  j["rows"] = Json::array();
  for (const EntropyRow& row : r.rows) {
    j["rows"].push_back({{"n", row.n},
                         {"h_gamma", Round12(row.h_gamma)},
                         {"h_gamma_bound", Round12(row.h_gamma_bound)},
                         {"h_g1", Round12(row.h_g1)},
                         {"h_g2", Round12(row.h_g2)},
                         {"h_gg", Round12(row.h_gg)},
                         {"h_triple", Round12(row.h_triple)},
                         {"g_bound", Round12(row.g_bound)},
                         {"gg_bound", Round12(row.gg_bound)},
                         {"holds", row.holds}});
  }
  return j.dump(2) + "\n";
}

void WriteFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

}  // namespace chansynth
