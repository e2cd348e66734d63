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

#ifndef CHANSYNTH_KERNELS_H_
#define CHANSYNTH_KERNELS_H_

// Data-parallel inner loops of the samplers. Every kernel has a portable
// scalar reference and, where the build supports it, an AVX2 variant chosen
// at runtime. Variants are required to be bit-identical: the decoder
// regenerates codebooks from the same words the encoder saw.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace chansynth::kernels {

struct PhiloxKey {
  std::uint32_t k0 = 0;
  std::uint32_t k1 = 0;
};

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxBlock = std::array<std::uint32_t, 4>;

// Which part of the counter advances from one block to the next.
enum class CounterStep {
  kIndex,  // 64-bit (c1:c0) increments
  kBlock,  // 32-bit c2 increments
};

// Philox4x32 with 10 rounds (Salmon et al., SC'11).
PhiloxBlock Philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

// Packs a block into two 64-bit words: (x1:x0), (x3:x2).
inline void PackBlock(const PhiloxBlock& b, std::uint64_t* out) {
  out[0] = (static_cast<std::uint64_t>(b[1]) << 32) | b[0];
  out[1] = (static_cast<std::uint64_t>(b[3]) << 32) | b[2];
}

// Writes 2 * blocks words for `blocks` consecutive counters starting at
// `base`.
using PhiloxWordsFn = void (*)(PhiloxKey key, PhiloxCounter base,
                               CounterStep step, std::size_t blocks,
                               std::uint64_t* out);

// out[i] = number of thresholds t with t <= (words[i] >> 11). Thresholds are
// ascending values in [0, 2^53].
using WordsToSymbolsFn = void (*)(const std::uint64_t* words, std::size_t count,
                                  const std::uint64_t* thresholds,
                                  std::size_t num_thresholds,
                                  std::uint8_t* out);

struct KernelTable {
  std::string_view name;
  PhiloxWordsFn philox_words;
  WordsToSymbolsFn words_to_symbols;
};

const KernelTable& ScalarKernels();
// nullptr when the variant is not compiled in or not supported by this CPU.
const KernelTable* Avx2Kernels();

const KernelTable& ActiveKernels();
// Accepts "auto", "scalar" or "avx2". Returns false if unavailable. The
// initial choice honours CHANSYNTH_KERNELS in the environment.
bool SelectKernels(std::string_view name);

// Inverse-CDF thresholds for a discrete law over symbols 0..k-1:
// thresholds[j] = round(2^53 * (p_0 + ... + p_j)) for j < k-1.
template <typename Real>
std::vector<std::uint64_t> CdfThresholds(std::span<const Real> probs);

}  // namespace chansynth::kernels

#endif  // CHANSYNTH_KERNELS_H_
