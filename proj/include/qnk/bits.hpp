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

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace qnk {

// Fixed-width bit string of at most 64 bits. Character 0 of the textual form
// is the most-significant bit of `value()`, which is also qubit 0 of the
// register it addresses.
class BitString {
 public:
  static constexpr std::size_t kMaxWidth = 64;

  BitString() = default;
  BitString(std::size_t width, std::uint64_t value);

  static BitString zeros(std::size_t width) { return BitString(width, 0); }
  static BitString ones(std::size_t width);
  static BitString parse(std::string_view text);

  std::size_t width() const { return width_; }
  std::uint64_t value() const { return value_; }

  // Bit at textual position i (0 = leftmost).
  bool at(std::size_t i) const;
  std::size_t popcount() const;
  bool is_zero() const { return value_ == 0; }

  // Leftmost `count` characters.
  BitString prefix(std::size_t count) const;
  // Rightmost `count` characters.
  BitString suffix(std::size_t count) const;
  // this || tail (this occupies the leftmost positions).
  BitString concat(const BitString& tail) const;

  std::string str() const;

  BitString operator^(const BitString& other) const;
  BitString operator&(const BitString& other) const;
  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::size_t width_ = 0;
  std::uint64_t value_ = 0;
};

inline std::uint64_t width_mask(std::size_t width) {
  return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

}  // namespace qnk
