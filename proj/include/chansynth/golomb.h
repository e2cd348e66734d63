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

#ifndef CHANSYNTH_GOLOMB_H_
#define CHANSYNTH_GOLOMB_H_

#include <cstdint>

#include "chansynth/bitstream.h"

namespace chansynth {

inline constexpr long double kMaxIntegerGolombParam = 0x1.0p62L;

// Optimal Golomb parameter for a geometric source on {1, 2, ...} with success
// probability p: the unique m >= 1 with
//   (1-p)^m + (1-p)^(m+1) <= 1 < (1-p)^(m-1) + (1-p)^m.
// Throws kDomainError for p outside (0, 1).
long double GolombParamReal(long double p);
// As above, as an integer. Throws kDomainError if m exceeds 2^62.
std::uint64_t GolombParamFor(long double p);

class GolombCode {
 public:
  // Throws kDomainError for m == 0.
  explicit GolombCode(std::uint64_t m);

  std::uint64_t m() const { return m_; }

  // Indices are 1-based. Throws kDomainError for k == 0.
  void Encode(std::uint64_t k, BitWriter& out) const;
  BitString Encode(std::uint64_t k) const;
  // Throws kUnexpectedEndOfStream on truncation and kMalformedBitstream when
  // the codeword denotes an index that does not fit in 64 bits.
  std::uint64_t Decode(BitReader& in) const;

  std::uint64_t Length(std::uint64_t k) const;

 private:
  std::uint64_t m_;
  int b_;             // ceil(log2 m)
  std::uint64_t u_;   // 2^b - m: remainders below u use b-1 bits
};

// Expected codeword length of Golomb(m) under Geometric(p) on {1, 2, ...}.
long double GolombExpectedLength(long double m, long double p);

// Entropy in bits of Geometric(p) on {1, 2, ...}.
long double GeometricEntropy(long double p);

// Exact law of the Golomb(m(p)) codeword length of a Geometric(p) index,
// sampled without materializing the index. Valid for any p in (0, 1),
// including parameters beyond the integer range.
class GolombLengthLaw {
 public:
  explicit GolombLengthLaw(long double p);

  long double m() const { return m_; }
  // u1, u2 uniform on [0, 1).
  std::uint64_t Sample(double u1, double u2) const;
  long double ExpectedLength() const;

 private:
  long double p_;
  long double m_;
  int b_;
  long double log_fail_;       // log(1 - p)
  long double p_short_;        // P(remainder uses b-1 bits)
};

}  // namespace chansynth

#endif  // CHANSYNTH_GOLOMB_H_
