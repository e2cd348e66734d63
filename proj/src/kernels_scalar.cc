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

#include <cmath>
#include <cstdlib>
#include <string>

#include "chansynth/kernels.h"

namespace chansynth::kernels {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void Round(PhiloxBlock& c, const PhiloxKey& k) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k.k0, lo1, hi0 ^ c[3] ^ k.k1, lo0};
}

void PhiloxWordsScalar(PhiloxKey key, PhiloxCounter base, CounterStep step,
                       std::size_t blocks, std::uint64_t* out) {
  for (std::size_t b = 0; b < blocks; ++b) {
    PhiloxCounter ctr = base;
    if (step == CounterStep::kBlock) {
      ctr[2] += static_cast<std::uint32_t>(b);
    } else {
      const std::uint64_t idx =
          ((static_cast<std::uint64_t>(base[1]) << 32) | base[0]) + b;
      ctr[0] = static_cast<std::uint32_t>(idx);
      ctr[1] = static_cast<std::uint32_t>(idx >> 32);
    }
    PackBlock(Philox4x32_10(ctr, key), out + 2 * b);
  }
}

void WordsToSymbolsScalar(const std::uint64_t* words, std::size_t count,
                          const std::uint64_t* thresholds,
                          std::size_t num_thresholds, std::uint8_t* out) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t u = words[i] >> 11;
    std::uint8_t s = 0;
    for (std::size_t t = 0; t < num_thresholds; ++t) s += thresholds[t] <= u;
    out[i] = s;
  }
}

const KernelTable kScalar{"scalar", &PhiloxWordsScalar, &WordsToSymbolsScalar};

}  // namespace

PhiloxBlock Philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  PhiloxBlock c = ctr;
  Round(c, key);
  for (int r = 1; r < 10; ++r) {
    key.k0 += kWeyl0;
    key.k1 += kWeyl1;
    Round(c, key);
  }
  return c;
}

const KernelTable& ScalarKernels() { return kScalar; }

namespace {

const KernelTable* Resolve(std::string_view name) {
  if (name == "scalar") return &kScalar;
  if (name == "avx2") return Avx2Kernels();
  if (name == "auto" || name.empty()) {
    const KernelTable* avx2 = Avx2Kernels();
    return avx2 ? avx2 : &kScalar;
  }
  return nullptr;
}

const KernelTable* InitialKernels() {
  const char* env = std::getenv("CHANSYNTH_KERNELS");
  const KernelTable* t = Resolve(env ? env : "auto");
  return t ? t : Resolve("auto");
}

const KernelTable*& Active() {
  static const KernelTable* active = InitialKernels();
  return active;
}

}  // namespace

const KernelTable& ActiveKernels() { return *Active(); }

bool SelectKernels(std::string_view name) {
  const KernelTable* t = Resolve(name);
  if (!t) return false;
  Active() = t;
  return true;
}

template <typename Real>
std::vector<std::uint64_t> CdfThresholds(std::span<const Real> probs) {
  std::vector<std::uint64_t> out;
  if (probs.size() < 2) return out;
  constexpr long double kScale = 9007199254740992.0L;  // 2^53
  long double cum = 0.0L;
  for (std::size_t j = 0; j + 1 < probs.size(); ++j) {
    cum += static_cast<long double>(probs[j]);
    long double t = std::nearbyint(cum * kScale);
    if (t > kScale) t = kScale;
    if (t < 0.0L) t = 0.0L;
    out.push_back(static_cast<std::uint64_t>(t));
  }
  return out;
}

template std::vector<std::uint64_t> CdfThresholds<double>(
    std::span<const double>);
template std::vector<std::uint64_t> CdfThresholds<long double>(
    std::span<const long double>);

}  // namespace chansynth::kernels
