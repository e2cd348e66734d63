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

#ifndef CHANSYNTH_REJECTION_H_
#define CHANSYNTH_REJECTION_H_

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>

#include "chansynth/counter_stream.h"
#include "chansynth/error.h"

namespace chansynth {

inline constexpr std::uint64_t kDefaultIterationLimit = 1'000'000'000ull;
inline constexpr long double kCeilingTolerance = 1e-9L;

struct RejectionOptions {
  std::uint64_t iteration_limit = kDefaultIterationLimit;
};

template <typename Item>
struct SampleResult {
  std::uint64_t index = 0;  // 1-based
  Item item{};
  // Largest ratio / ceiling seen over the scanned prefix of the codebook.
  long double max_quotient = 0.0L;
};

// A proposal maps (stream, index) to an item. Items at distinct indices are
// i.i.d. because the underlying words are.
template <typename Proposal>
class CodebookStream {
 public:
  using Item = decltype(std::declval<const Proposal&>().Draw(
      std::declval<const CounterStream&>(), std::uint64_t{1}));

  CodebookStream(std::uint64_t seed, std::string_view domain_key,
                 Proposal proposal)
      : stream_(seed, domain_key), proposal_(std::move(proposal)) {}

  Item operator()(std::uint64_t index) const {
    return proposal_.Draw(stream_, index);
  }
  const CounterStream& stream() const { return stream_; }
  const Proposal& proposal() const { return proposal_; }

 private:
  CounterStream stream_;
  Proposal proposal_;
};

template <typename Proposal>
auto CodebookItem(std::uint64_t seed, std::string_view domain_key,
                  std::uint64_t index, const Proposal& proposal) {
  return proposal.Draw(CounterStream(seed, domain_key), index);
}

// Proposal over a finite support {0, ..., k-1}: one word per item.
class DiscreteProposal {
 public:
  DiscreteProposal() = default;
  explicit DiscreteProposal(DiscreteSampler sampler)
      : sampler_(std::move(sampler)) {}

  std::size_t Draw(const CounterStream& s, std::uint64_t index) const {
    return sampler_.Sample(s.Word(index));
  }
  const DiscreteSampler& sampler() const { return sampler_; }

 private:
  DiscreteSampler sampler_;
};

// Rejection sampling with likelihood-ratio ceiling M: returns the first
// index i >= 1 with U_i <= ratio(item(i)) / M. `codebook(i)` is called with
// i = 1, 2, ... in order; `uniform()` is the private acceptance stream.
// Throws kCeilingViolation if some ratio exceeds M by more than the relative
// tolerance, kIterationLimit after options.iteration_limit draws.
template <typename Codebook, typename RatioFn, typename UniformFn>
auto RejectionSample(Codebook&& codebook, RatioFn&& ratio, long double ceiling,
                     UniformFn&& uniform, const RejectionOptions& options = {}) {
  using Item = std::decay_t<decltype(codebook(std::uint64_t{1}))>;
  if (!(ceiling >= 1.0L) || !std::isfinite(ceiling)) {
    throw Error(ErrorCode::kDomainError, "likelihood-ratio ceiling must be >= 1");
  }
  SampleResult<Item> result;
  for (std::uint64_t i = 1; i <= options.iteration_limit; ++i) {
    Item item = codebook(i);
    const long double r = ratio(item);
    if (r > ceiling * (1.0L + kCeilingTolerance)) {
      std::ostringstream os;
      os.precision(17);
      os << "ratio " << static_cast<double>(r) << " exceeds ceiling "
         << static_cast<double>(ceiling);
      throw Error(ErrorCode::kCeilingViolation, os.str());
    }
    const long double q = r / ceiling;
    if (q > result.max_quotient) result.max_quotient = q;
    if (q > 0.0L && static_cast<long double>(uniform()) <= q) {
      result.index = i;
      result.item = std::move(item);
      return result;
    }
  }
  throw Error(ErrorCode::kIterationLimit,
              "no acceptance within " + std::to_string(options.iteration_limit) +
                  " codebook entries");
}

}  // namespace chansynth

#endif  // CHANSYNTH_REJECTION_H_
