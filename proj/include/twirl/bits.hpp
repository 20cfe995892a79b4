// Copyright 2026 The twirl Authors
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

#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

namespace twirl {

/// Fixed-length bit vector packed into 64-bit words. Bit i lives in
/// word i/64 at position i%64; unused high bits of the last word are
/// kept zero so equality and hashing work on the raw words.
class BitVec {
 public:
  BitVec() = default;

  explicit BitVec(int num_bits) : num_bits_(num_bits) {
    if (num_bits < 0) {
      throw std::invalid_argument("BitVec: negative bit count");
    }
    words_.assign(word_count(num_bits), 0);
  }

  static BitVec from_uint(int num_bits, uint64_t bits) {
    if (num_bits < 0 || num_bits > 64) {
      throw std::invalid_argument(
          fmt::format("BitVec::from_uint: bit count {} outside [0, 64]", num_bits));
    }
    BitVec v(num_bits);
    if (num_bits > 0) {
      v.words_[0] = bits & mask_low(num_bits);
    }
    return v;
  }

  int size() const { return num_bits_; }
  int word_count() const { return static_cast<int>(words_.size()); }

  bool get(int i) const {
    check_index(i);
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }

  void set(int i, bool v) {
    check_index(i);
    uint64_t bit = uint64_t{1} << (i & 63);
    if (v) {
      words_[i >> 6] |= bit;
    } else {
      words_[i >> 6] &= ~bit;
    }
  }

  void flip(int i) {
    check_index(i);
    words_[i >> 6] ^= uint64_t{1} << (i & 63);
  }

  uint64_t word(int w) const { return words_[w]; }
  uint64_t& word(int w) { return words_[w]; }

  /// Value as an integer; only valid for vectors of at most 64 bits.
  uint64_t to_uint() const {
    if (num_bits_ > 64) {
      throw std::domain_error(
          fmt::format("BitVec::to_uint: {} bits do not fit one word", num_bits_));
    }
    return words_.empty() ? 0 : words_[0];
  }

  bool any() const {
    for (uint64_t w : words_) {
      if (w) return true;
    }
    return false;
  }

  int popcount() const {
    int c = 0;
    for (uint64_t w : words_) c += std::popcount(w);
    return c;
  }

  BitVec& operator^=(const BitVec& o) {
    check_same_size(o);
    for (size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }

  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

  friend BitVec operator&(const BitVec& a, const BitVec& b) {
    a.check_same_size(b);
    BitVec r(a.num_bits_);
    for (size_t i = 0; i < a.words_.size(); ++i) r.words_[i] = a.words_[i] & b.words_[i];
    return r;
  }

  bool operator==(const BitVec&) const = default;

  /// popcount(a & b) without materializing the intersection.
  static int and_popcount(const BitVec& a, const BitVec& b) {
    a.check_same_size(b);
    int c = 0;
    for (size_t i = 0; i < a.words_.size(); ++i) {
      c += std::popcount(a.words_[i] & b.words_[i]);
    }
    return c;
  }

  static int and_parity(const BitVec& a, const BitVec& b) {
    return and_popcount(a, b) & 1;
  }

  size_t hash() const {
    size_t h = static_cast<size_t>(num_bits_);
    for (uint64_t w : words_) {
      h ^= static_cast<size_t>(w) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }

  static constexpr uint64_t mask_low(int bits) {
    return bits >= 64 ? ~uint64_t{0} : (uint64_t{1} << bits) - 1;
  }

  static int word_count(int num_bits) { return (num_bits + 63) >> 6; }

 private:
  void check_index(int i) const {
    if (i < 0 || i >= num_bits_) {
      throw std::out_of_range(
          fmt::format("BitVec: index {} outside [0, {})", i, num_bits_));
    }
  }

  void check_same_size(const BitVec& o) const {
    if (num_bits_ != o.num_bits_) {
      throw std::invalid_argument(
          fmt::format("BitVec: size mismatch ({} vs {})", num_bits_, o.num_bits_));
    }
  }

  int num_bits_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace twirl
