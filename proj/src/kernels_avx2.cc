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

// Compiled with -mavx2; only reached after a runtime CPU check.

#include "chansynth/kernels.h"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace chansynth::kernels {

#if defined(__AVX2__)
namespace {

// 32x32 -> 64 multiply of all eight lanes, split into low and high halves.
inline void MulHiLo(__m256i a, __m256i m, __m256i* lo, __m256i* hi) {
  const __m256i even = _mm256_mul_epu32(a, m);
  const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), m);
  *lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0xAA);
  *hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0xAA);
}

// Eight Philox4x32-10 blocks, one per lane.
inline void Philox8(__m256i& c0, __m256i& c1, __m256i& c2, __m256i& c3,
                    PhiloxKey key) {
  const __m256i m0 = _mm256_set1_epi32(static_cast<int>(0xD2511F53u));
  const __m256i m1 = _mm256_set1_epi32(static_cast<int>(0xCD9E8D57u));
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key.k0 += 0x9E3779B9u;
      key.k1 += 0xBB67AE85u;
    }
    const __m256i k0 = _mm256_set1_epi32(static_cast<int>(key.k0));
    const __m256i k1 = _mm256_set1_epi32(static_cast<int>(key.k1));
    __m256i lo0, hi0, lo1, hi1;
    MulHiLo(c0, m0, &lo0, &hi0);
    MulHiLo(c2, m1, &lo1, &hi1);
    c0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), k0);
    c1 = lo1;
    c2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), k1);
    c3 = lo0;
  }
}

// Writes 16 words: block-major, two words per block.
inline void Store8(__m256i x0, __m256i x1, __m256i x2, __m256i x3,
                   std::uint64_t* out) {
  const __m256i a = _mm256_unpacklo_epi32(x0, x1);
  const __m256i b = _mm256_unpackhi_epi32(x0, x1);
  const __m256i c = _mm256_unpacklo_epi32(x2, x3);
  const __m256i d = _mm256_unpackhi_epi32(x2, x3);
  const __m256i e = _mm256_unpacklo_epi64(a, c);
  const __m256i f = _mm256_unpackhi_epi64(a, c);
  const __m256i g = _mm256_unpacklo_epi64(b, d);
  const __m256i h = _mm256_unpackhi_epi64(b, d);
  auto* dst = reinterpret_cast<__m256i*>(out);
  _mm256_storeu_si256(dst + 0, _mm256_permute2x128_si256(e, f, 0x20));
  _mm256_storeu_si256(dst + 1, _mm256_permute2x128_si256(g, h, 0x20));
  _mm256_storeu_si256(dst + 2, _mm256_permute2x128_si256(e, f, 0x31));
  _mm256_storeu_si256(dst + 3, _mm256_permute2x128_si256(g, h, 0x31));
}

void PhiloxWordsAvx2(PhiloxKey key, PhiloxCounter base, CounterStep step,
                     std::size_t blocks, std::uint64_t* out) {
  std::size_t b = 0;
  alignas(32) std::uint32_t lane0[8], lane1[8], lane2[8];
  for (; b + 8 <= blocks; b += 8) {
    for (int l = 0; l < 8; ++l) {
      if (step == CounterStep::kBlock) {
        lane0[l] = base[0];
        lane1[l] = base[1];
        lane2[l] = base[2] + static_cast<std::uint32_t>(b + l);
      } else {
        const std::uint64_t idx =
            ((static_cast<std::uint64_t>(base[1]) << 32) | base[0]) + b + l;
        lane0[l] = static_cast<std::uint32_t>(idx);
        lane1[l] = static_cast<std::uint32_t>(idx >> 32);
        lane2[l] = base[2];
      }
    }
    __m256i c0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(lane0));
    __m256i c1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(lane1));
    __m256i c2 = _mm256_load_si256(reinterpret_cast<const __m256i*>(lane2));
    __m256i c3 = _mm256_set1_epi32(static_cast<int>(base[3]));
    Philox8(c0, c1, c2, c3, key);
    Store8(c0, c1, c2, c3, out + 2 * b);
  }
  if (b < blocks) {
    PhiloxCounter rest = base;
    if (step == CounterStep::kBlock) {
      rest[2] += static_cast<std::uint32_t>(b);
    } else {
      const std::uint64_t idx =
          ((static_cast<std::uint64_t>(base[1]) << 32) | base[0]) + b;
      rest[0] = static_cast<std::uint32_t>(idx);
      rest[1] = static_cast<std::uint32_t>(idx >> 32);
    }
    ScalarKernels().philox_words(key, rest, step, blocks - b, out + 2 * b);
  }
}

void WordsToSymbolsAvx2(const std::uint64_t* words, std::size_t count,
                        const std::uint64_t* thresholds,
                        std::size_t num_thresholds, std::uint8_t* out) {
  std::size_t i = 0;
  const __m256i base =
      _mm256_set1_epi64x(static_cast<long long>(num_thresholds));
  alignas(32) std::uint64_t lanes[4];
  for (; i + 4 <= count; i += 4) {
    const __m256i u = _mm256_srli_epi64(
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words + i)), 11);
    // Values are below 2^54, so the signed compare is exact.
    __m256i acc = base;
    for (std::size_t t = 0; t < num_thresholds; ++t) {
      const __m256i thr =
          _mm256_set1_epi64x(static_cast<long long>(thresholds[t]));
      acc = _mm256_add_epi64(acc, _mm256_cmpgt_epi64(thr, u));
    }
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    for (int l = 0; l < 4; ++l) out[i + l] = static_cast<std::uint8_t>(lanes[l]);
  }
  if (i < count) {
    ScalarKernels().words_to_symbols(words + i, count - i, thresholds,
                                     num_thresholds, out + i);
  }
}

const KernelTable kAvx2{"avx2", &PhiloxWordsAvx2, &WordsToSymbolsAvx2};

}  // namespace

const KernelTable* Avx2Kernels() {
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &kAvx2 : nullptr;
}

#else

const KernelTable* Avx2Kernels() { return nullptr; }

#endif

}  // namespace chansynth::kernels
