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

#include "chansynth/huffman.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

namespace chansynth {

HuffmanCode HuffmanCode::Build(std::span<const Real> probs) {
  if (probs.empty()) throw Error(ErrorCode::kEmptySupport, "empty pmf");
  Real total = 0.0L;
  for (Real p : probs) {
    if (!(p > 0.0L)) {
      throw Error(ErrorCode::kDomainError, "Huffman atoms must be positive");
    }
    total += p;
  }
  if (std::fabs(total - 1.0L) > kHuffmanSumTolerance) {
    throw Error(ErrorCode::kDomainError, "Huffman pmf does not sum to 1");
  }

  HuffmanCode code;
  code.codewords_.resize(probs.size());
  // (probability, smallest symbol, node id)
  using Entry = std::tuple<Real, std::size_t, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
  for (std::size_t s = 0; s < probs.size(); ++s) {
    Node leaf;
    leaf.symbol = static_cast<int>(s);
    code.nodes_.push_back(leaf);
    queue.emplace(probs[s], s, static_cast<int>(s));
  }
  while (queue.size() > 1) {
    const auto [pa, sa, a] = queue.top();
    queue.pop();
    const auto [pb, sb, b] = queue.top();
    queue.pop();
    Node parent;
    parent.child[0] = a;
    parent.child[1] = b;
    code.nodes_.push_back(parent);
    queue.emplace(pa + pb, std::min(sa, sb),
                  static_cast<int>(code.nodes_.size() - 1));
  }
  code.root_ = std::get<2>(queue.top());

  // Iterative walk assigning codewords.
  std::vector<std::pair<int, BitString>> stack{{code.root_, BitString{}}};
  while (!stack.empty()) {
    auto [id, prefix] = std::move(stack.back());
    stack.pop_back();
    const Node& node = code.nodes_[id];
    if (node.symbol >= 0) {
      code.codewords_[node.symbol] = std::move(prefix);
      continue;
    }
    for (int bit = 1; bit >= 0; --bit) {
      BitString next = prefix;
      next.PushBack(bit == 1);
      stack.emplace_back(node.child[bit], std::move(next));
    }
  }
  return code;
}

std::size_t HuffmanCode::max_length() const {
  std::size_t m = 0;
  for (const BitString& c : codewords_) m = std::max(m, c.size());
  return m;
}

void HuffmanCode::Encode(std::size_t symbol, BitWriter& out) const {
  if (symbol >= codewords_.size()) {
    throw Error(ErrorCode::kPrecondition, "symbol outside the code support");
  }
  out.Write(codewords_[symbol]);
}

std::size_t HuffmanCode::Decode(BitReader& in) const {
  int id = root_;
  while (nodes_[id].symbol < 0) id = nodes_[id].child[in.Read() ? 1 : 0];
  return static_cast<std::size_t>(nodes_[id].symbol);
}

Real HuffmanCode::KraftSum() const {
  Real s = 0.0L;
  for (const BitString& c : codewords_) {
    s += std::ldexp(1.0L, -static_cast<int>(c.size()));
  }
  return s;
}

bool HuffmanCode::KraftExact() const {
  std::vector<std::uint64_t> count(max_length() + 1, 0);
  for (const BitString& c : codewords_) ++count[c.size()];
  for (std::size_t len = count.size() - 1; len > 0; --len) {
    if (count[len] % 2 != 0) return false;
    count[len - 1] += count[len] / 2;
  }
  return count[0] == 1;
}

Real HuffmanCode::ExpectedLength(std::span<const Real> probs) const {
  Real e = 0.0L;
  for (std::size_t s = 0; s < probs.size() && s < codewords_.size(); ++s) {
    e += probs[s] * static_cast<Real>(codewords_[s].size());
  }
  return e;
}

}  // namespace chansynth
