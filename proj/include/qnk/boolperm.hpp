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

// Keyed Boolean permutation F_s on {0,1}^n and the reversible register map
// U_s : |m>|t> -> |m>|t xor F_s(m)>.
//
// F_s is a 3-round balanced Feistel network over the halves (L, R) of m:
//   round keys   k1 = s[0, n/2), k2 = s[n/2, n), k3 = k1 xor k2
//   round        (L, R) -> (R, L xor f(k, R))
//   f(k, x)      ((x + k) mod 2^h) xor rotl_h(x xor k, 1),  h = n/2
// With h = 1 the rotation is the identity and cancels the addition, leaving
// f == 0 and an s-independent F; there the rotation term is dropped and
// f(k, x) = x xor k.
//
// F_s is not a pseudorandom permutation. Any security property checked in this
// project comes from averaging over s, never from the strength of F.

#include <cstddef>
#include <cstdint>
#include <functional>

#include "qnk/bits.hpp"
#include "qnk/qsim.hpp"

namespace qnk::boolperm {

// Largest n verify_bijection will enumerate.
inline constexpr std::size_t kMaxBijectionWidth = 20;

class PermKey {
 public:
  // n = |s| must be even and at least 2.
  explicit PermKey(BitString s);

  const BitString& bits() const { return s_; }
  std::size_t width() const { return s_.width(); }
  std::size_t half_width() const { return s_.width() / 2; }

 private:
  BitString s_;
};

std::uint64_t round_function(std::uint64_t key, std::uint64_t x, std::size_t half_width);

BitString feistel_permute(const PermKey& key, const BitString& m);

using Mapping = std::function<BitString(const BitString&)>;

// True iff `candidate` is injective on {0,1}^n (and stays within n bits).
bool verify_bijection(const Mapping& candidate, std::size_t n);
bool verify_bijection(const PermKey& key, std::size_t n);

// |m>_source |t>_target -> |m>_source |t xor F_s(m)>_target, extended
// linearly. Self-inverse. Both registers must be key.width() qubits wide.
qsim::PureState apply_us(const qsim::PureState& state, const qsim::RegisterLayout& layout,
                         const PermKey& key, qsim::RegisterId source, qsim::RegisterId target);

}  // namespace qnk::boolperm
