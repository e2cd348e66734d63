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

#include "chansynth/dmc.h"

#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "chansynth/error.h"

namespace chansynth {
namespace {

Real H2(Real p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIoError;
}

TEST(DmcValidateTest, AcceptsBsc) {
  const Dmc d = Dmc::Validate({0.5L, 0.5L}, {{0.89L, 0.11L}, {0.11L, 0.89L}});
  EXPECT_EQ(d.x_size(), 2u);
  EXPECT_EQ(d.y_size(), 2u);
}

TEST(DmcValidateTest, AcceptsDegenerateChannel) {
  const Dmc d = Dmc::Validate({1.0L}, {{1.0L}});
  EXPECT_EQ(MutualInformation(d), 0.0L);
  EXPECT_TRUE(IsSingular(d).singular);
}

TEST(DmcValidateTest, RejectsBadInputs) {
  EXPECT_EQ(CodeOf([] {
              Dmc::Validate({0.5L, 0.5L}, {{0.9L, 0.2L}, {0.1L, 0.8L}});
            }),
            ErrorCode::kNonStochastic);
  EXPECT_EQ(CodeOf([] {
              Dmc::Validate({1.2L, -0.2L}, {{1.0L}, {1.0L}});
            }),
            ErrorCode::kNegativeEntry);
  EXPECT_EQ(CodeOf([] { Dmc::Validate({}, {}); }), ErrorCode::kEmptyAlphabet);
  EXPECT_EQ(CodeOf([] { Dmc::Validate({1.0L}, {{0.5L, 0.5L}, {1.0L, 0.0L}}); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(CodeOf([] { Dmc::Validate({0.5L, 0.5L + 1e-11L}, {{1.0L}, {1.0L}}); }),
            ErrorCode::kNonStochastic);
}

TEST(DmcMarginalTest, Examples) {
  const auto bsc = MarginalY(MakeBsc(0.11L));
  EXPECT_NEAR(static_cast<double>(bsc[0]), 0.5, 1e-15);
  EXPECT_NEAR(static_cast<double>(bsc[1]), 0.5, 1e-15);

  const auto bec = MarginalY(MakeBec(0.5L));
  ASSERT_EQ(bec.size(), 3u);
  EXPECT_NEAR(static_cast<double>(bec[0]), 0.25, 1e-15);
  EXPECT_NEAR(static_cast<double>(bec[1]), 0.25, 1e-15);
  EXPECT_NEAR(static_cast<double>(bec[2]), 0.5, 1e-15);

  const Dmc point = Dmc::Validate({1.0L, 0.0L}, {{0.2L, 0.8L}, {0.6L, 0.4L}});
  EXPECT_NEAR(static_cast<double>(point.py(0)), 0.2, 1e-15);
  EXPECT_NEAR(static_cast<double>(point.py(1)), 0.8, 1e-15);
}

TEST(DmcMutualInformationTest, Examples) {
  EXPECT_NEAR(static_cast<double>(MutualInformation(MakeBsc(0.5L))), 0.0, 1e-15);
  EXPECT_NEAR(static_cast<double>(MutualInformation(MakeBsc(0.11L))),
              static_cast<double>(1 - H2(0.11L)), 1e-12);
  EXPECT_NEAR(static_cast<double>(MutualInformation(MakeBsc(0.11L))), 0.5001,
              1e-4);
  EXPECT_NEAR(static_cast<double>(MutualInformation(MakeBec(0.5L))), 0.5, 1e-15);
}

TEST(DmcMutualInformationTest, MatchesDirectJointSum) {
  const Dmc d = Dmc::Validate(
      {0.5L, 0.3L, 0.2L},
      {{0.7L, 0.2L, 0.1L}, {0.1L, 0.8L, 0.1L}, {0.2L, 0.2L, 0.6L}});
  Real mi = 0.0L;
  for (std::size_t x = 0; x < 3; ++x) {
    for (std::size_t y = 0; y < 3; ++y) {
      Real py = 0.0L;
      for (std::size_t a = 0; a < 3; ++a) py += d.px(a) * d.pyx(a, y);
      mi += d.px(x) * d.pyx(x, y) * std::log2(d.pyx(x, y) / py);
    }
  }
  EXPECT_NEAR(static_cast<double>(MutualInformation(d)), static_cast<double>(mi),
              1e-12);
}

TEST(DmcSingularityTest, Examples) {
  const Singularity bsc = IsSingular(MakeBsc(0.11L));
  EXPECT_FALSE(bsc.singular);
  ASSERT_TRUE(bsc.witness.has_value());
  EXPECT_EQ(*bsc.witness, (SingularityWitness{0, 0, 1}));

  EXPECT_TRUE(IsSingular(MakeBec(0.5L)).singular);
  EXPECT_FALSE(IsSingular(MakeBec(0.5L)).witness.has_value());
  EXPECT_TRUE(IsSingular(MakeIdentity(2)).singular);
}

TEST(DmcSingularityTest, BscFamily) {
  for (Real eps : {0.01L, 0.11L, 0.3L, 0.49L, 0.51L, 0.9L}) {
    EXPECT_FALSE(IsSingular(MakeBsc(eps)).singular) << static_cast<double>(eps);
  }
  EXPECT_TRUE(IsSingular(MakeBsc(0.5L)).singular);
}

TEST(DmcSingularityTest, IgnoresZeroProbabilityInputs) {
  const Dmc d = Dmc::Validate({1.0L, 0.0L}, {{0.3L, 0.7L}, {0.6L, 0.4L}});
  EXPECT_TRUE(IsSingular(d).singular);
}

TEST(DmcLlrTest, SupportMaskAndMean) {
  const Dmc bec = MakeBec(0.5L);
  EXPECT_TRUE(bec.llr().defined(0, 0));
  EXPECT_FALSE(bec.llr().defined(0, 1));
  EXPECT_EQ(bec.llr().at(0, 0), 1.0L);
  EXPECT_EQ(bec.llr().at(1, 2), 0.0L);
  Real mean = 0.0L;
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 3; ++y) {
      if (bec.llr().defined(x, y)) mean += bec.joint(x, y) * bec.llr().at(x, y);
    }
  }
  EXPECT_NEAR(static_cast<double>(mean),
              static_cast<double>(MutualInformation(bec)), 1e-9);
}

TEST(DmcSigmaTest, Examples) {
  EXPECT_NEAR(static_cast<double>(LlrSigma2(MakeBsc(0.5L))), 0.0, 1e-15);
  EXPECT_NEAR(static_cast<double>(LlrSigma2(MakeBec(0.5L))), 0.25, 1e-15);
  const Real a = std::log2(1.78L), b = std::log2(0.22L);
  const Real mean = 0.89L * a + 0.11L * b;
  const Real var = 0.89L * (a - mean) * (a - mean) + 0.11L * (b - mean) * (b - mean);
  EXPECT_NEAR(static_cast<double>(LlrSigma2(MakeBsc(0.11L))),
              static_cast<double>(var), 1e-12);
}

TEST(DmcSpecTest, RoundTripsAndRejectsGarbage) {
  const Dmc bec = MakeBec(0.5L);
  const Dmc back = ParseChannelSpec(FormatChannelSpec(bec));
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 3; ++y) EXPECT_EQ(back.pyx(x, y), bec.pyx(x, y));
  }
  EXPECT_EQ(CodeOf([] { ParseChannelSpec("{not json"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] {
              ParseChannelSpec(
                  R"({"x_size":1,"y_size":1,"px":["abc"],"pyx":[["1"]]})");
            }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] {
              ParseChannelSpec(
                  R"({"x_size":2,"y_size":1,"px":["1"],"pyx":[["1"]]})");
            }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(CodeOf([] { LoadChannelSpec("/nonexistent/channel.json"); }),
            ErrorCode::kIoError);
}

TEST(DmcSpecTest, ParsesDecimalStringsAtFullPrecision) {
  const Dmc d = ParseChannelSpec(
      R"({"x_size":2,"y_size":2,"px":["0.5","0.5"],
          "pyx":[["0.89","0.11"],["0.11","0.89"]]})");
  EXPECT_EQ(d.pyx(0, 1), 0.11L);
}

}  // namespace
}  // namespace chansynth
