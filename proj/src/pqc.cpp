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

#include "qnk/pqc.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "qnk/errors.hpp"
#include "qnk/parallel.hpp"

namespace qnk::pqc {

using qsim::Complex;
using qsim::Gate;
using qsim::GateKind;
using qsim::Matrix;
using qsim::Matrix2;

PqcFamily PqcFamily::of(FamilyId id) {
  switch (id) {
    case FamilyId::PQC1: return {id, "PQC1", Gate::of(GateKind::X), Gate::of(GateKind::Z)};
    case FamilyId::PQC2: return {id, "PQC2", Gate::of(GateKind::X), Gate::of(GateKind::Y)};
    case FamilyId::PQC3: return {id, "PQC3", Gate::of(GateKind::X), Gate::of(GateKind::H)};
    case FamilyId::PQC4: return {id, "PQC4", Gate::of(GateKind::Y), Gate::of(GateKind::H)};
    case FamilyId::Custom: break;
  }
  throw ArgumentError("PqcFamily::of needs a named family");
}

PqcFamily PqcFamily::parse(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "pqc1") return of(FamilyId::PQC1);
  if (lower == "pqc2") return of(FamilyId::PQC2);
  if (lower == "pqc3") return of(FamilyId::PQC3);
  if (lower == "pqc4") return of(FamilyId::PQC4);
  throw ArgumentError("unknown PQC family '" + std::string(name) + "' (expected pqc1..pqc4)");
}

PqcFamily PqcFamily::custom(std::string name, qsim::Gate u1, qsim::Gate u2) {
  if (!u1.is_unitary(qsim::kStructuralTol) || !u2.is_unitary(qsim::kStructuralTol)) {
    throw ArgumentError("family gates must be unitary");
  }
  return {FamilyId::Custom, std::move(name), std::move(u1), std::move(u2)};
}

std::vector<PqcFamily> named_families() {
  return {PqcFamily::of(FamilyId::PQC1), PqcFamily::of(FamilyId::PQC2),
          PqcFamily::of(FamilyId::PQC3), PqcFamily::of(FamilyId::PQC4)};
}

PqcKey sample_key(std::size_t n, Rng& rng) {
  if (n == 0) throw ArgumentError("key width must be at least 1");
  BitString alpha = rng.bits(n);
  BitString beta = rng.bits(n);
  return {alpha, beta};
}

PqcKey key_from_index(std::size_t n, std::uint64_t index) {
  if (2 * n >= 64 || index >= (std::uint64_t{1} << (2 * n))) {
    throw ArgumentError("key index out of range");
  }
  return {BitString(n, index >> n), BitString(n, index & width_mask(n))};
}

std::uint64_t key_index(const PqcKey& key) {
  return (key.alpha.value() << key.beta.width()) | key.beta.value();
}

namespace {

void check_key(const PqcKey& key, std::size_t width) {
  if (key.alpha.width() != width || key.beta.width() != width) {
    throw DimensionError("PQC key width " + std::to_string(key.alpha.width()) + "/" +
                         std::to_string(key.beta.width()) + " does not match target width " +
                         std::to_string(width));
  }
}

}  // namespace

qsim::PureState pqc_apply(const qsim::PureState& state, const PqcFamily& family, const PqcKey& key,
                          Direction direction) {
  check_key(key, state.num_qubits());
  if (direction == Direction::Encrypt) {
    const auto mid = qsim::apply_gate_layer(state, family.u2, key.beta);
    return qsim::apply_gate_layer(mid, family.u1, key.alpha);
  }
  const auto mid = qsim::apply_gate_layer(state, family.u1.adjoint(), key.alpha);
  return qsim::apply_gate_layer(mid, family.u2.adjoint(), key.beta);
}

qsim::PureState pqc_apply(const qsim::PureState& state, const qsim::RegisterLayout& layout,
                          qsim::RegisterId reg, const PqcFamily& family, const PqcKey& key,
                          Direction direction) {
  check_key(key, layout.slot(reg).width);
  if (direction == Direction::Encrypt) {
    const auto mid = qsim::apply_gate_layer(state, layout, reg, family.u2, key.beta);
    return qsim::apply_gate_layer(mid, layout, reg, family.u1, key.alpha);
  }
  const auto mid = qsim::apply_gate_layer(state, layout, reg, family.u1.adjoint(), key.alpha);
  return qsim::apply_gate_layer(mid, layout, reg, family.u2.adjoint(), key.beta);
}

Matrix key_unitary(const PqcFamily& family, const PqcKey& key) {
  if (key.alpha.width() != key.beta.width() || key.alpha.width() == 0) {
    throw DimensionError("malformed PQC key");
  }
  Matrix out = Matrix::Identity(1, 1);
  for (std::size_t q = 0; q < key.width(); ++q) {
    Matrix2 local = Matrix2::Identity();
    if (key.alpha.at(q)) local = local * family.u1.matrix;
    if (key.beta.at(q)) local = local * family.u2.matrix;
    out = qsim::kron(out, Matrix(local));
  }
  return out;
}

qsim::DensityMatrix perfect_encryption_average(const PqcFamily& family,
                                               const qsim::DensityMatrix& rho,
                                               std::size_t workers) {
  const std::size_t n = rho.num_qubits();
  if (n > kMaxAverageQubits) {
    throw ResourceLimitError("perfect_encryption_average enumerates 4^n keys; n = " +
                             std::to_string(n) + " exceeds the bound n <= " +
                             std::to_string(kMaxAverageQubits));
  }
  const std::uint64_t keys = std::uint64_t{1} << (2 * n);
  const auto dim = static_cast<Eigen::Index>(rho.dim());
  Matrix sum = partitioned_sum<Matrix>(keys, workers, [&](std::size_t begin, std::size_t end) {
    Matrix partial = Matrix::Zero(dim, dim);
    for (std::size_t k = begin; k < end; ++k) {
      const Matrix u = key_unitary(family, key_from_index(n, k));
      partial += u * rho.entries() * u.adjoint();
    }
    return partial;
  });
  sum /= static_cast<double>(keys);
  return qsim::DensityMatrix(n, std::move(sum));
}

BasisCheckReport orthonormal_basis_check(const PqcFamily& family) {
  std::array<Matrix2, 4> basis;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      Matrix2 m = Matrix2::Identity();
      if (a) m = m * family.u1.matrix;
      if (b) m = m * family.u2.matrix;
      basis[static_cast<std::size_t>(2 * a + b)] = m;
    }
  }
  BasisCheckReport report;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const Complex ip = (basis[static_cast<std::size_t>(i)].adjoint() *
                          basis[static_cast<std::size_t>(j)])
                             .trace() /
                         2.0;
      report.gram(i, j) = ip;
      const double expected = (i == j) ? 1.0 : 0.0;
      report.max_deviation = std::max(report.max_deviation, std::abs(ip - expected));
    }
  }
  report.orthonormal = report.max_deviation <= qsim::kAlgebraTol;
  return report;
}

bool anticommutation_check(const PqcFamily& family) {
  const Matrix2 anti = family.u1.matrix * family.u2.matrix + family.u2.matrix * family.u1.matrix;
  return anti.cwiseAbs().maxCoeff() <= qsim::kAlgebraTol;
}

BasisCoefficients::BasisCoefficients(std::size_t num_qubits, std::vector<Complex> values)
    : num_qubits_(num_qubits), values_(std::move(values)) {
  if (values_.size() != (std::size_t{1} << (2 * num_qubits))) {
    throw DimensionError("basis coefficient table must have 4^n entries");
  }
}

Complex BasisCoefficients::at(const BitString& alpha, const BitString& beta) const {
  if (alpha.width() != num_qubits_ || beta.width() != num_qubits_) {
    throw DimensionError("coefficient index width mismatch");
  }
  return values_.at(key_index({alpha, beta}));
}

BasisCoefficients basis_decompose(const qsim::DensityMatrix& rho, const PqcFamily& family) {
  if (!orthonormal_basis_check(family).orthonormal) {
    throw PreconditionError("basis_decompose needs an orthonormal operator basis; " + family.name +
                            " does not form one");
  }
  const std::size_t n = rho.num_qubits();
  if (n > kMaxAverageQubits) {
    throw ResourceLimitError("basis_decompose is limited to n <= " +
                             std::to_string(kMaxAverageQubits));
  }
  const std::uint64_t keys = std::uint64_t{1} << (2 * n);
  const double norm = static_cast<double>(rho.dim());
  std::vector<Complex> values(keys);
  for (std::uint64_t k = 0; k < keys; ++k) {
    const Matrix b = key_unitary(family, key_from_index(n, k));
    values[k] = (b.adjoint() * rho.entries()).trace() / norm;
  }
  return BasisCoefficients(n, std::move(values));
}

Matrix basis_reconstruct(const BasisCoefficients& coeffs, const PqcFamily& family) {
  const std::size_t n = coeffs.num_qubits();
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  Matrix out = Matrix::Zero(dim, dim);
  for (std::uint64_t k = 0; k < coeffs.values().size(); ++k) {
    out += coeffs.at_index(k) * key_unitary(family, key_from_index(n, k));
  }
  return out;
}

VerifierReport verify_family(const PqcFamily& family, std::size_t n, std::uint64_t seed) {
  VerifierReport report;
  report.family = family.name;
  report.n = n;
  report.orthonormal = orthonormal_basis_check(family).orthonormal;
  report.anticommute = anticommutation_check(family);

  std::vector<qsim::PureState> probes;
  probes.push_back(qsim::PureState::zero(n));
  probes.push_back(qsim::apply_gate_layer(qsim::PureState::zero(n), Gate::of(GateKind::H),
                                          BitString::ones(n)));
  Rng rng(seed, 0x7665726966ULL);
  for (int i = 0; i < 8; ++i) probes.push_back(qsim::PureState::random(n, rng));

  const qsim::DensityMatrix mixed = qsim::maximally_mixed(n);
  for (const auto& probe : probes) {
    const auto avg = perfect_encryption_average(family, qsim::to_density(probe));
    report.trace_distance_to_mixed =
        std::max(report.trace_distance_to_mixed, qsim::trace_distance(avg, mixed));
  }
  return report;
}

nlohmann::ordered_json to_json(const VerifierReport& report) {
  nlohmann::ordered_json j;
  j["family"] = report.family;
  j["orthonormal"] = report.orthonormal;
  j["anticommute"] = report.anticommute;
  j["n"] = report.n;
  j["trace_distance_to_mixed"] = report.trace_distance_to_mixed;
  return j;
}

}  // namespace qnk::pqc
