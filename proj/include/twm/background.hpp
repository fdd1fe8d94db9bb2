// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace twm {

/// ceil(log2(width)); 0 for width 1.
unsigned ceil_log2(unsigned width);

/// A B-bit data background. Bit 0 is the least significant bit.
class DataBackground {
 public:
  DataBackground(unsigned index, unsigned width);

  unsigned index() const { return index_; }
  unsigned width() const { return width_; }

  bool bit(unsigned j) const;
  std::size_t ones() const;
  /// The low 64 bits; the whole pattern when width() <= 64.
  std::uint64_t low_word() const { return limbs_.empty() ? 0 : limbs_[0]; }
  const std::vector<std::uint64_t>& limbs() const { return limbs_; }

  /// Most-significant bit first, e.g. "01010101" for a_1 at width 8.
  std::string to_string() const;

  friend bool operator==(const DataBackground&,
                         const DataBackground&) = default;

 private:
  unsigned index_;
  unsigned width_;
  std::vector<std::uint64_t> limbs_;
};

/// Background a_i for a B-bit word: a_0 is all-0; for 1 <= i <= ceil(log2 B)
/// bit j is 1 iff floor(j / 2^(i-1)) is even, i.e. alternating stripes of
/// width 2^(i-1) starting with ones at bit 0.
///
/// Throws std::out_of_range when width == 0 or i > ceil(log2 width).
DataBackground background_pattern(unsigned i, unsigned width);

/// a_0 ... a_ceil(log2 width).
std::vector<DataBackground> background_set(unsigned width);

/// Parses an MSB-first binary string ("0101").
DataBackground parse_background(const std::string& bits);

}  // namespace twm
