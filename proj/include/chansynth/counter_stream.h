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

#ifndef CHANSYNTH_COUNTER_STREAM_H_
#define CHANSYNTH_COUNTER_STREAM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chansynth/kernels.h"

namespace chansynth {

// SplitMix64 finalizer applied to x + golden gamma.
std::uint64_t Mix64(std::uint64_t x);
std::uint64_t Fnv1a64(std::string_view bytes);
// Order-sensitive combination of 64-bit values into one seed.
std::uint64_t DeriveSeed(std::initializer_list<std::uint64_t> parts);

// Counter-mode stream keyed by (seed, domain key). Word w of item i is
//   h      = FNV-1a-64(domain_key)
//   key    = Mix64(seed ^ Mix64(h))                  (k0 low, k1 high half)
//   block  = Philox4x32-10(ctr = {lo(i), hi(i), w / 2, lo(h) ^ hi(h)}, key)
//   word   = w even ? (x1:x0) : (x3:x2)
// Every word is a pure function of (seed, domain_key, i, w).
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::string_view domain_key);

  std::uint64_t Word(std::uint64_t index, std::uint32_t word = 0) const;
  // Words 0..out.size()-1 of item `index`.
  void ItemWords(std::uint64_t index, std::span<std::uint64_t> out) const;
  // Words 0 and 1 of `count` consecutive items starting at `first`.
  void IndexWords(std::uint64_t first, std::size_t count,
                  std::uint64_t* out) const;

  std::uint64_t seed() const { return seed_; }
  const std::string& domain_key() const { return domain_key_; }

 private:
  std::uint64_t seed_;
  std::string domain_key_;
  kernels::PhiloxKey key_;
  std::uint32_t tag_;
};

// Uniform in [0, 1) with 53 bits.
inline double ToUniform(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

// Sequential draws from a CounterStream (items 0, 1, 2, ... two words each),
// buffered in batches. Used for encoder-private randomness.
class PrivateRng {
 public:
  PrivateRng(std::uint64_t seed, std::string_view domain_key = "private");

  std::uint64_t NextWord();
  double Uniform() { return ToUniform(NextWord()); }

 private:
  void Refill();

  CounterStream stream_;
  std::uint64_t next_item_ = 0;
  std::vector<std::uint64_t> buffer_;
  std::size_t pos_ = 0;
};

// Inverse-CDF sampler over a finite ordered support, symbol = number of CDF
// thresholds at or below the top 53 bits of a word.
class DiscreteSampler {
 public:
  DiscreteSampler() = default;
  explicit DiscreteSampler(std::span<const long double> probs);
  explicit DiscreteSampler(std::span<const double> probs);

  std::size_t size() const { return size_; }
  std::size_t Sample(std::uint64_t word) const;
  // Maps many words at once through the active kernel table.
  void SampleMany(std::span<const std::uint64_t> words,
                  std::span<std::uint8_t> out) const;
  std::span<const std::uint64_t> thresholds() const { return thresholds_; }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> thresholds_;
};

}  // namespace chansynth

#endif  // CHANSYNTH_COUNTER_STREAM_H_
