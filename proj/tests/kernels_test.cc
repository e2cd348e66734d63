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

#include "chansynth/kernels.h"

#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>

namespace chansynth::kernels {
namespace {

class KernelEquivalenceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    avx2_ = Avx2Kernels();
    if (avx2_ == nullptr) GTEST_SKIP() << "AVX2 unavailable on this host";
  }
  const KernelTable* avx2_ = nullptr;
};

TEST_F(KernelEquivalenceTest, PhiloxWordsBitExact) {
  std::mt19937_64 rng(17);
  for (CounterStep step : {CounterStep::kIndex, CounterStep::kBlock}) {
    for (std::size_t blocks : {1u, 3u, 7u, 8u, 9u, 31u, 64u, 100u}) {
      for (int trial = 0; trial < 20; ++trial) {
        const PhiloxKey key{static_cast<std::uint32_t>(rng()),
                            static_cast<std::uint32_t>(rng())};
        PhiloxCounter base{static_cast<std::uint32_t>(rng()),
                           static_cast<std::uint32_t>(rng()),
                           static_cast<std::uint32_t>(rng()),
                           static_cast<std::uint32_t>(rng())};
        if (trial % 4 == 0) base[0] = 0xfffffffau;  // exercise 64-bit carry
        if (trial % 4 == 1) base[2] = 0xfffffffcu;  // exercise c2 wrap
        std::vector<std::uint64_t> a(2 * blocks), b(2 * blocks);
        ScalarKernels().philox_words(key, base, step, blocks, a.data());
        avx2_->philox_words(key, base, step, blocks, b.data());
        ASSERT_EQ(a, b) << "blocks=" << blocks;
      }
    }
  }
}

TEST_F(KernelEquivalenceTest, SymbolMappingBitExact) {
  std::mt19937_64 rng(23);
  for (std::size_t k : {1u, 2u, 3u, 5u, 16u, 200u}) {
    std::vector<double> p(k);
    for (double& v : p) v = static_cast<double>(rng() % 1000 + 1);
    if (k > 2) p[1] = 0.0;
    double total = 0;
    for (double v : p) total += v;
    for (double& v : p) v /= total;
    const auto thr = CdfThresholds<double>(p);
    for (std::size_t count : {0u, 1u, 3u, 4u, 5u, 17u, 1000u}) {
      std::vector<std::uint64_t> words(count);
      for (auto& w : words) w = rng();
      if (count > 2 && !thr.empty()) words[0] = thr[0] << 11;  // exact edge
      std::vector<std::uint8_t> a(count), b(count);
      ScalarKernels().words_to_symbols(words.data(), count, thr.data(),
                                       thr.size(), a.data());
      avx2_->words_to_symbols(words.data(), count, thr.data(), thr.size(),
                              b.data());
      ASSERT_EQ(a, b) << "k=" << k << " count=" << count;
    }
  }
}

TEST(KernelSelectionTest, ScalarAlwaysAvailable) {
  const std::string_view before = ActiveKernels().name;
  EXPECT_TRUE(SelectKernels("scalar"));
  EXPECT_EQ(ActiveKernels().name, "scalar");
  EXPECT_FALSE(SelectKernels("neon"));
  EXPECT_EQ(ActiveKernels().name, "scalar");
  EXPECT_TRUE(SelectKernels(before));
}

TEST(KernelSelectionTest, ScalarMatchesReferenceBlock) {
  std::vector<std::uint64_t> w(2);
  ScalarKernels().philox_words({0, 0}, {0, 0, 0, 0}, CounterStep::kIndex, 1,
                               w.data());
  std::uint64_t ref[2];
  PackBlock(Philox4x32_10({0, 0, 0, 0}, {0, 0}), ref);
  EXPECT_EQ(w[0], ref[0]);
  EXPECT_EQ(w[1], ref[1]);
}

}  // namespace
}  // namespace chansynth::kernels
