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

// Acceptance harness: one PASS/FAIL line per criterion. Exits 0 iff every
// criterion passes. Raw reports are written to --out.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chansynth/bench.h"
#include "chansynth/bitstream.h"
#include "chansynth/counter_stream.h"
#include "chansynth/dmc.h"
#include "chansynth/error.h"
#include "chansynth/golomb.h"
#include "chansynth/huffman.h"
#include "chansynth/llr_dist.h"
#include "chansynth/rejection.h"
#include "chansynth/stats.h"
#include "oracles.h"

namespace chansynth {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Context {
  std::filesystem::path channels;
  std::filesystem::path out;
  unsigned threads = 0;
  std::uint64_t violations = 0;
  double max_quotient = 0.0;
  RateReport bsc_rate;
  RateReport bec_rate;
};

std::string Fmt(const char* format, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), format, a);
  return buf;
}

void Note(Outcome& o, const std::string& s) {
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += s;
}

// 1. Joint law of (item, index) from rejection sampling.
Outcome RejectionLaw(Context& ctx) {
  Outcome o;
  const std::vector<long double> target{0.5L, 0.3L, 0.2L};
  const std::vector<long double> proposal{0.25L, 0.25L, 0.5L};
  constexpr long double kM = 2.0L;
  constexpr int kMaxIndex = 20;
  constexpr std::uint64_t kTrials = 1000000;
  const DiscreteProposal q{DiscreteSampler(proposal)};
  std::vector<std::uint64_t> hist(3 * (kMaxIndex + 1), 0);
  double sum = 0.0, sq = 0.0;
  for (std::uint64_t t = 0; t < kTrials; ++t) {
    const CodebookStream<DiscreteProposal> cb(DeriveSeed({1, t}), "criterion1", q);
    PrivateRng rng(DeriveSeed({2, t}));
    try {
      const auto r = RejectionSample(
          cb, [&](std::size_t a) { return target[a] / proposal[a]; }, kM,
          [&] { return rng.Uniform(); });
      const std::uint64_t i = std::min<std::uint64_t>(r.index, kMaxIndex + 1);
      ++hist[r.item * (kMaxIndex + 1) + (i - 1)];
      sum += static_cast<double>(r.index);
      sq += static_cast<double>(r.index) * static_cast<double>(r.index);
      ctx.max_quotient = std::max<double>(ctx.max_quotient, r.max_quotient);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kCeilingViolation) throw;
      ++ctx.violations;
    }
  }
  std::vector<Real> probs(hist.size());
  for (std::size_t s = 0; s < 3; ++s) {
    for (int i = 1; i <= kMaxIndex; ++i) {
      probs[s * (kMaxIndex + 1) + (i - 1)] =
          target[s] / kM * std::pow(1.0L - 1.0L / kM, i - 1);
    }
    probs[s * (kMaxIndex + 1) + kMaxIndex] =
        target[s] * std::pow(1.0L - 1.0L / kM, kMaxIndex);
  }
  const ChiSquareResult gof = ChiSquareGof(hist, probs);
  const double mean = sum / kTrials;
  const double se = std::sqrt((sq / kTrials - mean * mean) / kTrials);
  o.pass = gof.p_value > 0.001 && std::fabs(mean - 2.0) <= 3 * se;
  Note(o, "p=" + Fmt("%.4g", gof.p_value) + " dof=" + std::to_string(gof.dof));
  Note(o, "mean I=" + Fmt("%.5f", mean) + " se=" + Fmt("%.2g", se));
  return o;
}

// 2. End-to-end exactness on the five channels plus the negative control.
Outcome Exactness(Context& ctx) {
  Outcome o;
  ExperimentConfig cfg;
  cfg.ns = {1, 2};
  cfg.trials = 1000000;
  cfg.seed = 20260101;
  cfg.threads = ctx.threads;
  std::string csv;
  double min_p = 1.0;
  for (const char* name : {"bsc_0.11", "bsc_0.3", "bsc_0.5", "bec_0.5",
                           "identity_2"}) {
    const Dmc d = LoadChannelSpec(ctx.channels / (std::string(name) + ".json"));
    const ExactnessReport r = RunExactness(d, cfg);
    for (const ExactnessRow& row : r.rows) {
      ctx.violations += row.ceiling_violations;
      ctx.max_quotient = std::max(ctx.max_quotient, row.max_quotient);
      min_p = std::min(min_p, row.p_value);
      if (!row.pass) {
        Note(o, std::string(name) + " n=" + std::to_string(row.n) +
                    " FAIL p=" + Fmt("%.3g", row.p_value));
      }
    }
    o.pass = o.pass && r.pass;
    std::string block = ExactnessToCsv(r);
    if (!csv.empty()) block = block.substr(block.find('\n') + 1);
    csv += block;
  }
  WriteFile(ctx.out / "exactness.csv", csv);
  Note(o, "min p=" + Fmt("%.4g", min_p));

  ExperimentConfig neg = cfg;
  neg.ns = {2};
  neg.trials = 100000;
  neg.corrupt_decoder = true;
  const ExactnessReport bad =
      RunExactness(LoadChannelSpec(ctx.channels / "bsc_0.11.json"), neg);
  Note(o, "negative control " + std::string(bad.pass ? "PASSED (bad)" : "fails") +
              " p=" + Fmt("%.3g", bad.rows[0].p_value));
  o.pass = o.pass && !bad.pass;
  return o;
}

// 4. Rate bound; also feeds criteria 3 and 6.
Outcome RateBound(Context& ctx) {
  Outcome o;
  ExperimentConfig cfg;
  cfg.ns = {8, 16, 32, 64};
  cfg.trials = 10000;
  cfg.seed = 777;
  cfg.scheme = SchemeSelector::kBoth;
  cfg.threads = ctx.threads;
  ctx.bsc_rate = RunRateSweep(LoadChannelSpec(ctx.channels / "bsc_0.11.json"), cfg);
  ctx.bec_rate = RunRateSweep(LoadChannelSpec(ctx.channels / "bec_0.5.json"), cfg);
  WriteFile(ctx.out / "rate_bsc_0.11.csv", RateToCsv(ctx.bsc_rate));
  WriteFile(ctx.out / "rate_bec_0.5.csv", RateToCsv(ctx.bec_rate));
  WriteFile(ctx.out / "rate_bsc_0.11.json", RateToJson(ctx.bsc_rate));
  WriteFile(ctx.out / "rate_bec_0.5.json", RateToJson(ctx.bec_rate));
  for (const auto* report : {&ctx.bsc_rate, &ctx.bec_rate}) {
    for (const RateRow& row : report->rows) {
      ctx.violations += row.ceiling_violations;
      ctx.max_quotient = std::max(ctx.max_quotient, row.max_quotient);
      if (row.scheme != "two-stage") continue;
      const double slack = row.bound + 3 * row.stderr_rate - row.mean_rate;
      const bool ok = slack >= 0.0;
      o.pass = o.pass && ok;
      Note(o, std::string(row.singular ? "BEC" : "BSC") + " n=" +
                  std::to_string(row.n) + " rate=" + Fmt("%.4f", row.mean_rate) +
                  " bound=" + Fmt("%.4f", row.bound) + (ok ? "" : " EXCEEDED"));
    }
  }
  return o;
}

// 3. No ceiling violations anywhere.
Outcome Ceilings(Context& ctx) {
  Outcome o;
  o.pass = ctx.violations == 0 && ctx.max_quotient <= 1.0 + 1e-9;
  Note(o, "violations=" + std::to_string(ctx.violations) +
              " max ratio/ceiling=" + Fmt("%.6f", ctx.max_quotient));
  return o;
}

// 5. Entropy bounds.
Outcome Entropy(Context& ctx) {
  Outcome o;
  ExperimentConfig cfg;
  cfg.ns.clear();
  for (int n = 4; n <= 64; ++n) cfg.ns.push_back(n);
  cfg.delta = 0.5L;
  const EntropyReport r =
      RunEntropyCheck(LoadChannelSpec(ctx.channels / "bsc_0.11.json"), cfg);
  WriteFile(ctx.out / "entropy_bsc_0.11.csv", EntropyToCsv(r));
  const bool slope_ok = r.slope >= 0.3 && r.slope <= 0.6;
  bool gamma_ok = true;
  for (const EntropyRow& row : r.rows) {
    gamma_ok = gamma_ok && row.h_gamma <= row.h_gamma_bound + 1e-9;
  }
  bool geo_ok = true;
  for (long double p : {0.5L, 0.1L, 0.01L}) {
    long double h = 0.0L, tail = 1.0L;
    for (int k = 1; tail > 1e-15L; ++k) {
      const long double pk = p * std::pow(1.0L - p, k - 1);
      h -= pk * std::log2(pk);
      tail -= pk;
    }
    geo_ok = geo_ok && h <= std::log2(1.0L / p) + std::numbers::log2e_v<long double> &&
             std::fabs(h - GeometricEntropy(p)) < 1e-9L;
  }
  o.pass = slope_ok && gamma_ok && r.pass && geo_ok;
  Note(o, "slope=" + Fmt("%.4f", r.slope));
  Note(o, std::string("H(Gamma) bound ") + (gamma_ok ? "holds" : "violated"));
  Note(o, std::string("side-information bounds ") + (r.pass ? "hold" : "violated"));
  Note(o, std::string("geometric bound ") + (geo_ok ? "holds" : "violated"));
  return o;
}

// 6. Singular/nonsingular trend.
Outcome Dichotomy(Context& ctx) {
  Outcome o;
  auto fit = [](const RateReport& r, const std::string& scheme) {
    for (const RedundancyFit& f : r.fits) {
      if (f.scheme == scheme) return f.c;
    }
    return std::numeric_limits<double>::quiet_NaN();
  };
  auto rate = [](const RateReport& r, const std::string& scheme, int n) {
    for (const RateRow& row : r.rows) {
      if (row.scheme == scheme && row.n == n) return row.mean_rate;
    }
    return std::numeric_limits<double>::quiet_NaN();
  };
  const double c_bsc = fit(ctx.bsc_rate, "two-stage");
  const double c_bec = fit(ctx.bec_rate, "two-stage");
  const double two = rate(ctx.bsc_rate, "two-stage", 64);
  const double base = rate(ctx.bsc_rate, "baseline", 64);
  const bool trend = c_bec <= c_bsc - 0.25;
  const bool beats = two <= base;
  o.pass = trend && beats;
  Note(o, "c_BSC=" + Fmt("%.4f", c_bsc) + " c_BEC=" + Fmt("%.4f", c_bec));
  Note(o, "BSC n=64 two-stage=" + Fmt("%.4f", two) + " baseline=" + Fmt("%.4f", base));
  return o;
}

// 7. llr_dist against brute-force enumeration.
template <typename Map>
bool SameAtoms(const Map& got, const Map& want, double& worst) {
  if (got.size() != want.size()) return false;
  for (const auto& [k, p] : want) {
    auto it = got.find(k);
    if (it == got.end()) return false;
    worst = std::max(worst, static_cast<double>(std::fabs(it->second - p)));
  }
  return worst <= 1e-9;
}

bool OracleCase(const Dmc& d, const Quantizer& q, int n, double& worst) {
  const LlrModel m(d, q, n);
  const auto marg = oracle::GammaMarginal(d, q, n);
  bool ok = SameAtoms(m.marginal().atoms, marg, worst);
  std::map<BarTriple, Real> triples;
  for (const auto& x : oracle::AllSequences(d.x_size(), n)) {
    const Real px = oracle::SeqProb(d, x);
    if (!(px > 0.0L)) continue;
    const std::size_t t = m.TypeIndex(XType::FromSequence(x, d.x_size()));
    const auto cond = oracle::GammaGivenX(d, q, x);
    ok = SameAtoms(m.conditional(t).atoms, cond, worst) && ok;
    std::map<BarTriple, std::map<std::int64_t, Real>> given;
    for (const auto& [b, p] : cond) {
      const BarTriple tr = oracle::TripleFrom(q, cond, marg, b);
      ok = ok && m.Triple(t, b) == tr;
      triples[tr] += px * p;
      given[tr][b] += p;
    }
    for (auto& [tr, pmf] : given) {
      Real total = 0.0L;
      for (const auto& [b, p] : pmf) total += p;
      for (auto& [b, p] : pmf) p /= total;
      ok = SameAtoms(m.ConditionalGivenTriple(t, tr).atoms, pmf, worst) && ok;
    }
  }
  ok = SameAtoms(m.triple_marginal(), triples, worst) && ok;
  return ok;
}

Outcome OracleEquivalence(Context&) {
  Outcome o;
  const Dmc ternary = Dmc::Validate(
      {0.5L, 0.3L, 0.2L},
      {{0.7L, 0.2L, 0.1L}, {0.1L, 0.8L, 0.1L}, {0.2L, 0.2L, 0.6L}});
  const Dmc partial = Dmc::Validate(
      {0.45L, 0.35L, 0.2L},
      {{0.65L, 0.0L, 0.35L}, {0.0L, 0.55L, 0.45L}, {0.2L, 0.3L, 0.5L}});
  struct Case {
    const char* name;
    Dmc dmc;
    Real delta;
  };
  const std::vector<Case> cases{
      {"bsc0.11", MakeBsc(0.11L), 0.5L},
      {"bsc0.3-skewed", MakeBsc(0.3L, 0.7L), 0.4L},
      {"bec0.5", MakeBec(0.5L), 0.5L},
      {"identity3", MakeIdentity(3), 0.5L},
      {"ternary", ternary, 0.5L},
      {"partial-erasure", partial, 0.3L},
  };
  double worst = 0.0;
  int checked = 0;
  for (const Case& c : cases) {
    for (int n = 1; n <= 6; ++n) {
      if (!OracleCase(c.dmc, Quantizer(c.delta), n, worst)) {
        o.pass = false;
        Note(o, std::string(c.name) + " n=" + std::to_string(n) + " mismatch");
      }
      ++checked;
    }
  }
  Note(o, std::to_string(checked) + " cases, max atom error " + Fmt("%.2g", worst));
  return o;
}

// 8. Coding infrastructure.
Real BestPrefixLength(const std::vector<Real>& p) {
  if (p.size() == 1) return 0.0L;
  Real best = std::numeric_limits<Real>::infinity();
  std::vector<int> len(p.size());
  std::function<void(std::size_t, Real)> rec = [&](std::size_t i, Real kraft) {
    if (kraft > 1.0L) return;
    if (i == p.size()) {
      Real e = 0.0L;
      for (std::size_t s = 0; s < p.size(); ++s) e += p[s] * len[s];
      best = std::min(best, e);
      return;
    }
    for (int l = 1; l <= static_cast<int>(p.size()); ++l) {
      len[i] = l;
      rec(i + 1, kraft + std::ldexp(1.0L, -l));
    }
  };
  rec(0, 0.0L);
  return best;
}

Outcome Coding(Context&) {
  Outcome o;
  bool golomb_ok = true;
  double worst_kraft = 0.0;
  for (std::uint64_t m = 1; m <= 32; ++m) {
    const GolombCode g(m);
    BitWriter w;
    for (std::uint64_t k = 1; k <= 2000; ++k) g.Encode(k, w);
    const BitString bits = w.Finish();
    BitReader r(bits);
    for (std::uint64_t k = 1; k <= 2000; ++k) golomb_ok = golomb_ok && g.Decode(r) == k;
    golomb_ok = golomb_ok && r.AtEnd();
    // Whole blocks of m codewords have Kraft mass 1 - 2^-blocks.
    const std::uint64_t blocks = 40;
    long double kraft = 0.0L;
    for (std::uint64_t k = 1; k <= blocks * m; ++k) {
      kraft += std::ldexp(1.0L, -static_cast<int>(g.Length(k)));
    }
    kraft += std::ldexp(1.0L, -static_cast<int>(blocks));
    worst_kraft = std::max(worst_kraft, static_cast<double>(std::fabs(kraft - 1.0L)));
  }
  bool huffman_ok = true;
  double worst_gap = 0.0;
  PrivateRng rng(8, "criterion8");
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t k = 1 + rng.NextWord() % 5;
    std::vector<Real> p(k);
    Real total = 0.0L;
    for (Real& v : p) total += (v = static_cast<Real>(rng.NextWord() % 1000 + 1));
    for (Real& v : p) v /= total;
    const HuffmanCode h = HuffmanCode::Build(p);
    worst_kraft = std::max(worst_kraft, static_cast<double>(std::fabs(h.KraftSum() - 1.0L)));
    huffman_ok = huffman_ok && h.KraftExact();
    worst_gap = std::max(worst_gap, static_cast<double>(std::fabs(
                                        h.ExpectedLength(p) - BestPrefixLength(p))));
    BitWriter w;
    for (std::size_t s = 0; s < k; ++s) h.Encode(s, w);
    const BitString bits = w.Finish();
    BitReader r(bits);
    for (std::size_t s = 0; s < k; ++s) huffman_ok = huffman_ok && h.Decode(r) == s;
  }
  o.pass = golomb_ok && huffman_ok && worst_kraft <= 1e-12 && worst_gap <= 1e-12;
  Note(o, std::string("roundtrips ") + (golomb_ok && huffman_ok ? "exact" : "BROKEN"));
  Note(o, "max Kraft error " + Fmt("%.2g", worst_kraft));
  Note(o, "max Huffman gap to optimum " + Fmt("%.2g", worst_gap));
  return o;
}

}  // namespace
}  // namespace chansynth

int main(int argc, char** argv) {
  using namespace chansynth;
  CLI::App app{"chansynth acceptance criteria"};
  Context ctx;
  std::string channels = "channels", out = "acceptance_out";
  app.add_option("--channels", channels, "channel spec directory");
  app.add_option("--out", out, "report directory");
  app.add_option("--threads", ctx.threads, "worker threads (0 = all cores)");
  std::vector<int> only;
  app.add_option("--only", only, "run only these criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  ctx.channels = channels;
  ctx.out = out;
  std::filesystem::create_directories(ctx.out);

  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome(Context&)> run;
  };
  // Criterion 3 aggregates counts from 1, 2 and 4, and 6 reuses the sweep of
  // 4, so the run order differs from the printed order.
  const std::vector<Criterion> order{
      {1, "rejection-sampler law", 30, RejectionLaw},
      {2, "exact synthesis", 900, Exactness},
      {4, "rate bound", 1800, RateBound},
      {3, "ceiling validity", 0, Ceilings},
      {5, "entropy bounds", 300, Entropy},
      {6, "singular/nonsingular trend", 0, Dichotomy},
      {7, "oracle equivalence", 120, OracleEquivalence},
      {8, "coding infrastructure", 0, Coding},
  };
  std::map<int, std::string> lines;
  bool all = true;
  for (const Criterion& c : order) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) {
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(ctx);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += "; runtime over budget";
    }
    all = all && o.pass;
    char head[160];
    std::snprintf(head, sizeof(head), "criterion %d %-28s %s (%.1f s) ", c.id,
                  c.name, o.pass ? "PASS" : "FAIL", secs);
    lines[c.id] = head + o.detail;
    std::fprintf(stderr, "criterion %d finished in %.1f s\n", c.id, secs);
  }
  for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
  std::printf("overall %s\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}
