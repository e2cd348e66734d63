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

#include "chansynth/bitstream.h"

#include "chansynth/error.h"

namespace chansynth {

BitString BitString::FromText(std::string_view text) {
  BitString out;
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw Error(ErrorCode::kParseError, "bit text must contain only 0 and 1");
    }
    out.PushBack(c == '1');
  }
  return out;
}

void BitString::PushBack(bool bit) {
  if ((size_ & 7) == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (size_ & 7));
  ++size_;
}

void BitString::AppendBits(std::uint64_t value, int count) {
  for (int i = count - 1; i >= 0; --i) PushBack((value >> i) & 1u);
}

void BitString::Append(const BitString& other) {
  for (std::size_t i = 0; i < other.size(); ++i) PushBack(other.at(i));
}

std::string BitString::ToText() const {
  std::string s;
  s.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) s.push_back(at(i) ? '1' : '0');
  return s;
}

bool BitReader::Read() {
  if (pos_ >= bits_.size()) {
    throw Error(ErrorCode::kUnexpectedEndOfStream,
                "read past end of bitstream at bit " + std::to_string(pos_));
  }
  return bits_.at(pos_++);
}

std::uint64_t BitReader::ReadBits(int count) {
  std::uint64_t v = 0;
  for (int i = 0; i < count; ++i) v = (v << 1) | (Read() ? 1u : 0u);
  return v;
}

}  // namespace chansynth
