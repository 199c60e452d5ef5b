/**
 * This code is part of the QNK workbench.
 *
 * (C) Copyright The QNK Workbench Authors 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 *
 * Any modifications or derivative works of this code must retain this
 * copyright notice, and modified files need to carry a notice indicating
 * that they have been altered from the originals.
 */

#include "qnk/bits.hpp"

#include <bit>

#include "qnk/errors.hpp"

namespace qnk {

BitString::BitString(std::size_t width, std::uint64_t value) : width_(width), value_(value) {
  if (width > kMaxWidth) {
    throw ArgumentError("bit string wider than 64 bits");
  }
  if ((value & ~width_mask(width)) != 0) {
    throw ArgumentError("value " + std::to_string(value) + " does not fit in " +
                        std::to_string(width) + " bits");
  }
}

BitString BitString::ones(std::size_t width) { return BitString(width, width_mask(width)); }

BitString BitString::parse(std::string_view text) {
  if (text.size() > kMaxWidth) {
    throw ArgumentError("bit string wider than 64 bits");
  }
  std::uint64_t value = 0;
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw ArgumentError("bit string may contain only '0' and '1': '" + std::string(text) + "'");
    }
    value = (value << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return BitString(text.size(), value);
}

bool BitString::at(std::size_t i) const {
  if (i >= width_) {
    throw DimensionError("bit index out of range");
  }
  return ((value_ >> (width_ - 1 - i)) & 1u) != 0;
}

std::size_t BitString::popcount() const { return static_cast<std::size_t>(std::popcount(value_)); }

BitString BitString::prefix(std::size_t count) const {
  if (count > width_) {
    throw DimensionError("prefix longer than bit string");
  }
  return BitString(count, count == 0 ? 0 : value_ >> (width_ - count));
}

BitString BitString::suffix(std::size_t count) const {
  if (count > width_) {
    throw DimensionError("suffix longer than bit string");
  }
  return BitString(count, value_ & width_mask(count));
}

BitString BitString::concat(const BitString& tail) const {
  if (width_ + tail.width_ > kMaxWidth) {
    throw ArgumentError("concatenation wider than 64 bits");
  }
  const std::uint64_t head = tail.width_ >= 64 ? 0 : value_ << tail.width_;
  return BitString(width_ + tail.width_, head | tail.value_);
}

std::string BitString::str() const {
  std::string out(width_, '0');
  for (std::size_t i = 0; i < width_; ++i) {
    if (at(i)) out[i] = '1';
  }
  return out;
}

BitString BitString::operator^(const BitString& other) const {
  if (width_ != other.width_) {
    throw DimensionError("xor of bit strings with widths " + std::to_string(width_) + " and " +
                         std::to_string(other.width_));
  }
  return BitString(width_, value_ ^ other.value_);
}

BitString BitString::operator&(const BitString& other) const {
  if (width_ != other.width_) {
    throw DimensionError("and of bit strings with different widths");
  }
  return BitString(width_, value_ & other.value_);
}

}  // namespace qnk
