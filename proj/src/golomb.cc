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

#include "chansynth/golomb.h"

#include <bit>
#include <cmath>
#include <limits>

#include "chansynth/error.h"

namespace chansynth {
namespace {

void CheckProbability(long double p) {
  if (!(p > 0.0L && p < 1.0L)) {
    throw Error(ErrorCode::kDomainError,
                "geometric success probability must lie in (0, 1)");
  }
}

// (1-p)^a + (1-p)^(a+1), evaluated in the log domain.
long double PairMass(long double log_fail, long double a) {
  return std::exp(a * log_fail) * (1.0L + std::exp(log_fail));
}

int CeilLog2(long double m) {
  int b = 0;
  while (std::ldexp(1.0L, b) < m) ++b;
  return b;
}

}  // namespace

long double GolombParamReal(long double p) {
  CheckProbability(p);
  const long double log_fail = std::log1p(-p);
  long double m = std::ceil(std::log1p(1.0L - p) / -log_fail);
  if (m < 1.0L) m = 1.0L;
  // Settle rounding at the rule's boundaries while unit steps are exact.
  if (m > kMaxIntegerGolombParam) return m;
  while (m > 1.0L && PairMass(log_fail, m - 1.0L) <= 1.0L) m -= 1.0L;
  while (PairMass(log_fail, m) > 1.0L) m += 1.0L;
  return m;
}

std::uint64_t GolombParamFor(long double p) {
  const long double m = GolombParamReal(p);
  if (m > kMaxIntegerGolombParam) {
    throw Error(ErrorCode::kDomainError,
                "Golomb parameter exceeds the integer range");
  }
  return static_cast<std::uint64_t>(m);
}

GolombCode::GolombCode(std::uint64_t m) : m_(m) {
  if (m == 0) throw Error(ErrorCode::kDomainError, "Golomb parameter is 0");
  b_ = m == 1 ? 0 : static_cast<int>(std::bit_width(m - 1));
  u_ = b_ == 64 ? (0 - m) : ((std::uint64_t{1} << b_) - m);
}

void GolombCode::Encode(std::uint64_t k, BitWriter& out) const {
  if (k == 0) throw Error(ErrorCode::kDomainError, "Golomb indices are >= 1");
  const std::uint64_t q = (k - 1) / m_;
  const std::uint64_t r = (k - 1) % m_;
  for (std::uint64_t i = 0; i < q; ++i) out.Write(true);
  out.Write(false);
  if (b_ == 0) return;
  if (r < u_) {
    out.WriteBits(r, b_ - 1);
  } else {
    out.WriteBits(r + u_, b_);
  }
}

BitString GolombCode::Encode(std::uint64_t k) const {
  BitWriter w;
  Encode(k, w);
  return w.Finish();
}

std::uint64_t GolombCode::Decode(BitReader& in) const {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t q = 0;
  while (in.Read()) {
    ++q;
    if (q > (kMax - m_) / m_) {
      throw Error(ErrorCode::kMalformedBitstream,
                  "Golomb quotient overflows the index range");
    }
  }
  std::uint64_t r = 0;
  if (b_ > 0) {
    r = in.ReadBits(b_ - 1);
    if (r >= u_) {
      r = ((r << 1) | (in.Read() ? 1u : 0u)) - u_;
    }
  }
  return q * m_ + r + 1;
}

std::uint64_t GolombCode::Length(std::uint64_t k) const {
  if (k == 0) throw Error(ErrorCode::kDomainError, "Golomb indices are >= 1");
  const std::uint64_t q = (k - 1) / m_;
  const std::uint64_t r = (k - 1) % m_;
  if (b_ == 0) return q + 1;
  return q + 1 + static_cast<std::uint64_t>(r < u_ ? b_ - 1 : b_);
}

long double GolombExpectedLength(long double m, long double p) {
  CheckProbability(p);
  const long double log_fail = std::log1p(-p);
  const long double s = std::exp(m * log_fail);
  const long double mean_q = s / -std::expm1(m * log_fail);
  const int b = CeilLog2(m);
  if (b == 0) return mean_q + 1.0L;
  const long double u = std::ldexp(1.0L, b) - m;
  const long double p_short = std::expm1(u * log_fail) / std::expm1(m * log_fail);
  return mean_q + 1.0L + static_cast<long double>(b) - p_short;
}

long double GeometricEntropy(long double p) {
  CheckProbability(p);
  const long double f = 1.0L - p;
  return (-f * std::log2(f) - p * std::log2(p)) / p;
}

GolombLengthLaw::GolombLengthLaw(long double p)
    : p_(p), m_(GolombParamReal(p)), b_(CeilLog2(m_)), log_fail_(std::log1p(-p)) {
  const long double u = std::ldexp(1.0L, b_) - m_;
  p_short_ = b_ == 0 ? 0.0L
                     : std::expm1(u * log_fail_) / std::expm1(m_ * log_fail_);
}

std::uint64_t GolombLengthLaw::Sample(double u1, double u2) const {
  // q = number of whole blocks of m failures: P(q >= j) = (1-p)^(m j).
  const long double v = 1.0L - static_cast<long double>(u1);  // in (0, 1]
  const long double q = std::floor(std::log(v) / (m_ * log_fail_));
  std::uint64_t len = static_cast<std::uint64_t>(q) + 1;
  if (b_ > 0) {
    len += static_cast<std::uint64_t>(
        static_cast<long double>(u2) < p_short_ ? b_ - 1 : b_);
  }
  return len;
}

long double GolombLengthLaw::ExpectedLength() const {
  return GolombExpectedLength(m_, p_);
}

}  // namespace chansynth
