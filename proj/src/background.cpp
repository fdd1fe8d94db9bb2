// SPDX-License-Identifier: Apache-2.0

#include "twm/background.hpp"

#include <bit>
#include <stdexcept>

namespace twm {

unsigned ceil_log2(unsigned width) {
  if (width <= 1) return 0;
  return static_cast<unsigned>(std::bit_width(width - 1));
}

DataBackground::DataBackground(unsigned index, unsigned width)
    : index_(index), width_(width), limbs_((width + 63) / 64, 0) {
  if (width == 0) throw std::out_of_range("background width must be >= 1");
  if (index > ceil_log2(width))
    throw std::out_of_range("background index " + std::to_string(index) +
                            " exceeds ceil(log2 " + std::to_string(width) +
                            ")");
  if (index == 0) return;
  const unsigned stripe_shift = index - 1;
  for (unsigned j = 0; j < width; ++j)
    if (((j >> stripe_shift) & 1u) == 0) limbs_[j / 64] |= 1ull << (j % 64);
}

bool DataBackground::bit(unsigned j) const {
  return (limbs_[j / 64] >> (j % 64)) & 1u;
}

std::size_t DataBackground::ones() const {
  std::size_t n = 0;
  for (auto limb : limbs_) n += static_cast<std::size_t>(std::popcount(limb));
  return n;
}

std::string DataBackground::to_string() const {
  std::string s;
  s.reserve(width_);
  for (unsigned j = width_; j-- > 0;) s.push_back(bit(j) ? '1' : '0');
  return s;
}

DataBackground background_pattern(unsigned i, unsigned width) {
  return DataBackground(i, width);
}

std::vector<DataBackground> background_set(unsigned width) {
  std::vector<DataBackground> out;
  for (unsigned i = 0; i <= ceil_log2(width); ++i)
    out.push_back(background_pattern(i, width));
  return out;
}

DataBackground parse_background(const std::string& bits) {
  if (bits.empty()) throw std::invalid_argument("empty background pattern");
  for (char c : bits)
    if (c != '0' && c != '1')
      throw std::invalid_argument("background pattern '" + bits +
                                  "' is not binary");
  const auto width = static_cast<unsigned>(bits.size());
  for (unsigned i = 0; i <= ceil_log2(width); ++i) {
    DataBackground candidate(i, width);
    if (candidate.to_string() == bits) return candidate;
  }
  throw std::invalid_argument("pattern '" + bits +
                              "' is not a stripe background a_i");
}

}  // namespace twm
