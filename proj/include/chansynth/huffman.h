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

#ifndef CHANSYNTH_HUFFMAN_H_
#define CHANSYNTH_HUFFMAN_H_

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "chansynth/bitstream.h"
#include "chansynth/dmc.h"
#include "chansynth/error.h"

namespace chansynth {

inline constexpr Real kHuffmanSumTolerance = 1e-9L;

// Static binary Huffman code over symbols 0..k-1. Ties are broken by
// (probability, smallest symbol in the subtree); the first node removed from
// the queue becomes the 0 branch. A single symbol gets the empty codeword.
class HuffmanCode {
 public:
  // Throws kEmptySupport for an empty pmf and kDomainError for nonpositive
  // atoms or a total differing from 1 by more than 1e-9.
  static HuffmanCode Build(std::span<const Real> probs);

  std::size_t size() const { return codewords_.size(); }
  const BitString& codeword(std::size_t symbol) const {
    return codewords_[symbol];
  }
  std::size_t length(std::size_t symbol) const {
    return codewords_[symbol].size();
  }
  std::size_t max_length() const;

  void Encode(std::size_t symbol, BitWriter& out) const;
  // Throws kUnexpectedEndOfStream on truncation.
  std::size_t Decode(BitReader& in) const;

  Real KraftSum() const;
  // True iff the Kraft sum equals 1 in exact dyadic arithmetic.
  bool KraftExact() const;
  Real ExpectedLength(std::span<const Real> probs) const;

 private:
  struct Node {
    int child[2] = {-1, -1};
    int symbol = -1;
  };

  std::vector<BitString> codewords_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

// Huffman code over the ordered support of a map-valued pmf.
template <typename Key>
class KeyedHuffman {
 public:
  KeyedHuffman() = default;
  explicit KeyedHuffman(const std::map<Key, Real>& pmf) {
    std::vector<Real> probs;
    for (const auto& [key, p] : pmf) {
      index_[key] = keys_.size();
      keys_.push_back(key);
      probs.push_back(p);
    }
    code_ = HuffmanCode::Build(probs);
  }

  // Throws kPrecondition if `key` is outside the support.
  void Encode(const Key& key, BitWriter& out) const {
    code_.Encode(IndexOf(key), out);
  }
  Key Decode(BitReader& in) const { return keys_[code_.Decode(in)]; }
  std::size_t Length(const Key& key) const { return code_.length(IndexOf(key)); }

  const HuffmanCode& code() const { return code_; }
  const std::vector<Key>& keys() const { return keys_; }

 private:
  std::size_t IndexOf(const Key& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) {
      throw Error(ErrorCode::kPrecondition, "symbol outside the code support");
    }
    return it->second;
  }

  std::vector<Key> keys_;
  std::map<Key, std::size_t> index_;
  HuffmanCode code_;
};

}  // namespace chansynth

#endif  // CHANSYNTH_HUFFMAN_H_
