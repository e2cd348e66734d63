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

#include "chansynth/counter_stream.h"

#include <algorithm>

#include "chansynth/error.h"

namespace chansynth {

std::uint64_t Mix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::uint64_t DeriveSeed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x243F6A8885A308D3ull;
  for (std::uint64_t p : parts) h = Mix64(h ^ Mix64(p));
  return h;
}

CounterStream::CounterStream(std::uint64_t seed, std::string_view domain_key)
    : seed_(seed), domain_key_(domain_key) {
  const std::uint64_t h = Fnv1a64(domain_key);
  const std::uint64_t key = Mix64(seed ^ Mix64(h));
  key_ = {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
  tag_ = static_cast<std::uint32_t>(h) ^ static_cast<std::uint32_t>(h >> 32);
}

std::uint64_t CounterStream::Word(std::uint64_t index,
                                  std::uint32_t word) const {
  const kernels::PhiloxBlock b = kernels::Philox4x32_10(
      {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
       word / 2, tag_},
      key_);
  std::uint64_t packed[2];
  kernels::PackBlock(b, packed);
  return packed[word & 1];
}

void CounterStream::ItemWords(std::uint64_t index,
                              std::span<std::uint64_t> out) const {
  if (out.empty()) return;
  const std::size_t blocks = (out.size() + 1) / 2;
  const kernels::PhiloxCounter base{static_cast<std::uint32_t>(index),
                                    static_cast<std::uint32_t>(index >> 32), 0,
                                    tag_};
  if (out.size() % 2 == 0) {
    kernels::ActiveKernels().philox_words(key_, base, kernels::CounterStep::kBlock,
                                          blocks, out.data());
    return;
  }
  std::vector<std::uint64_t> tmp(2 * blocks);
  kernels::ActiveKernels().philox_words(key_, base, kernels::CounterStep::kBlock,
                                        blocks, tmp.data());
  std::copy_n(tmp.begin(), out.size(), out.begin());
}

void CounterStream::IndexWords(std::uint64_t first, std::size_t count,
                               std::uint64_t* out) const {
  const kernels::PhiloxCounter base{static_cast<std::uint32_t>(first),
                                    static_cast<std::uint32_t>(first >> 32), 0,
                                    tag_};
  kernels::ActiveKernels().philox_words(key_, base, kernels::CounterStep::kIndex,
                                        count, out);
}

PrivateRng::PrivateRng(std::uint64_t seed, std::string_view domain_key)
    : stream_(seed, domain_key) {}

void PrivateRng::Refill() {
  constexpr std::size_t kBatch = 16;
  buffer_.resize(2 * kBatch);
  stream_.IndexWords(next_item_, kBatch, buffer_.data());
  next_item_ += kBatch;
  pos_ = 0;
}

std::uint64_t PrivateRng::NextWord() {
  if (pos_ >= buffer_.size()) Refill();
  return buffer_[pos_++];
}

DiscreteSampler::DiscreteSampler(std::span<const long double> probs)
    : size_(probs.size()), thresholds_(kernels::CdfThresholds(probs)) {
  if (probs.empty()) throw Error(ErrorCode::kEmptySupport, "empty law");
}

DiscreteSampler::DiscreteSampler(std::span<const double> probs)
    : size_(probs.size()), thresholds_(kernels::CdfThresholds(probs)) {
  if (probs.empty()) throw Error(ErrorCode::kEmptySupport, "empty law");
}

std::size_t DiscreteSampler::Sample(std::uint64_t word) const {
  const std::uint64_t u = word >> 11;
  // Thresholds are ascending: count those <= u.
  return static_cast<std::size_t>(
      std::upper_bound(thresholds_.begin(), thresholds_.end(), u) -
      thresholds_.begin());
}

void DiscreteSampler::SampleMany(std::span<const std::uint64_t> words,
                                 std::span<std::uint8_t> out) const {
  if (size_ > 256) {
    throw Error(ErrorCode::kDomainError, "symbol alphabet exceeds 256");
  }
  kernels::ActiveKernels().words_to_symbols(words.data(), words.size(),
                                            thresholds_.data(),
                                            thresholds_.size(), out.data());
}

}  // namespace chansynth
