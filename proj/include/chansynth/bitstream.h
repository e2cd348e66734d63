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

#ifndef CHANSYNTH_BITSTREAM_H_
#define CHANSYNTH_BITSTREAM_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace chansynth {

// Bits are packed most-significant-first within each byte: bit 0 of the
// string is the 0x80 bit of byte 0.
class BitString {
 public:
  BitString() = default;
  // Parses a string of '0'/'1' characters. Throws kParseError otherwise.
  static BitString FromText(std::string_view text);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  bool at(std::size_t i) const {
    return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u;
  }
  void Flip(std::size_t i) { bytes_[i >> 3] ^= 0x80u >> (i & 7); }

  void PushBack(bool bit);
  // Appends the low `count` bits of `value`, most significant first.
  void AppendBits(std::uint64_t value, int count);
  void Append(const BitString& other);

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::string ToText() const;

  bool operator==(const BitString& o) const = default;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t size_ = 0;
};

class BitWriter {
 public:
  void Write(bool bit) { bits_.PushBack(bit); }
  void WriteBits(std::uint64_t value, int count) {
    bits_.AppendBits(value, count);
  }
  void Write(const BitString& bits) { bits_.Append(bits); }
  std::size_t size() const { return bits_.size(); }
  BitString Finish() { return std::move(bits_); }

 private:
  BitString bits_;
};

class BitReader {
 public:
  explicit BitReader(const BitString& bits) : bits_(bits) {}

  // Throws kUnexpectedEndOfStream when no bits remain.
  bool Read();
  std::uint64_t ReadBits(int count);

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bits_.size() - pos_; }
  bool AtEnd() const { return pos_ == bits_.size(); }

 private:
  const BitString& bits_;
  std::size_t pos_ = 0;
};

}  // namespace chansynth

#endif  // CHANSYNTH_BITSTREAM_H_
