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

// Private-quantum-channel key families U_k = U1^alpha U2^beta with uniform
// keys k = (alpha, beta) in {0,1}^n x {0,1}^n, and the numerical checks behind
// the perfect-encryption property.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qnk/bits.hpp"
#include "qnk/qsim.hpp"
#include "qnk/rng.hpp"

namespace qnk::pqc {

// Largest n accepted by perfect_encryption_average (4^n conjugations of a
// 2^n x 2^n matrix).
inline constexpr std::size_t kMaxAverageQubits = 4;

enum class FamilyId { PQC1, PQC2, PQC3, PQC4, Custom };

struct PqcFamily {
  FamilyId id = FamilyId::PQC4;
  std::string name;
  qsim::Gate u1;
  qsim::Gate u2;

  // PQC1 = (X,Z), PQC2 = (X,Y), PQC3 = (X,H), PQC4 = (Y,H).
  static PqcFamily of(FamilyId id);
  // "pqc1".."pqc4", case-insensitive.
  static PqcFamily parse(std::string_view name);
  static PqcFamily custom(std::string name, qsim::Gate u1, qsim::Gate u2);
};

std::vector<PqcFamily> named_families();

struct PqcKey {
  BitString alpha;
  BitString beta;

  std::size_t width() const { return alpha.width(); }
  friend bool operator==(const PqcKey&, const PqcKey&) = default;
};

enum class Direction { Encrypt, Decrypt };

PqcKey sample_key(std::size_t n, Rng& rng);
// Key number `index` in [0, 4^n): alpha = high n bits, beta = low n bits.
PqcKey key_from_index(std::size_t n, std::uint64_t index);
std::uint64_t key_index(const PqcKey& key);

// Encrypt applies U_k = U1^alpha U2^beta (U2^beta acts first); decrypt applies
// U_k^dagger. The whole state is the target.
qsim::PureState pqc_apply(const qsim::PureState& state, const PqcFamily& family, const PqcKey& key,
                          Direction direction);
// Same, targeting one register of a laid-out state.
qsim::PureState pqc_apply(const qsim::PureState& state, const qsim::RegisterLayout& layout,
                          qsim::RegisterId reg, const PqcFamily& family, const PqcKey& key,
                          Direction direction);

// Full 2^n x 2^n matrix of U1^alpha U2^beta.
qsim::Matrix key_unitary(const PqcFamily& family, const PqcKey& key);

// Exact uniform average of U_k rho U_k^dagger over all 4^n keys. The key space
// is split across `workers` threads; workers == 1 is the bit-reproducible
// serial path.
qsim::DensityMatrix perfect_encryption_average(const PqcFamily& family,
                                               const qsim::DensityMatrix& rho,
                                               std::size_t workers = 1);

struct BasisCheckReport {
  bool orthonormal = false;
  // gram(i, j) = tr(B_i^dagger B_j) / 2 for B = {I, U2, U1, U1 U2}, indexed by
  // 2a + b for U1^a U2^b.
  Eigen::Matrix4cd gram;
  double max_deviation = 0.0;
};

// Checks {U1^a U2^b : a, b in {0,1}} for orthonormality under tr(A^dagger B)/2.
BasisCheckReport orthonormal_basis_check(const PqcFamily& family);
// U1 U2 + U2 U1 == 0 within 1e-12.
bool anticommutation_check(const PqcFamily& family);

// Coefficients a_{alpha,beta} = tr(rho (U1^alpha U2^beta)^dagger) / 2^n of rho
// in the operator basis of the family.
class BasisCoefficients {
 public:
  BasisCoefficients(std::size_t num_qubits, std::vector<qsim::Complex> values);

  std::size_t num_qubits() const { return num_qubits_; }
  qsim::Complex at(const BitString& alpha, const BitString& beta) const;
  qsim::Complex at_index(std::uint64_t key_index) const { return values_.at(key_index); }
  const std::vector<qsim::Complex>& values() const { return values_; }

 private:
  std::size_t num_qubits_;
  std::vector<qsim::Complex> values_;
};

// Requires a family passing orthonormal_basis_check (PreconditionError
// otherwise).
BasisCoefficients basis_decompose(const qsim::DensityMatrix& rho, const PqcFamily& family);
qsim::Matrix basis_reconstruct(const BasisCoefficients& coeffs, const PqcFamily& family);

struct VerifierReport {
  std::string family;
  bool orthonormal = false;
  bool anticommute = false;
  std::size_t n = 0;
  // Largest trace distance between the key-averaged state and I/2^n over the
  // probe set |0..0>, |+..+> and eight seeded random pure states.
  double trace_distance_to_mixed = 0.0;
};

VerifierReport verify_family(const PqcFamily& family, std::size_t n, std::uint64_t seed = 0);
nlohmann::ordered_json to_json(const VerifierReport& report);

}  // namespace qnk::pqc
