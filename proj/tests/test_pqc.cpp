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

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qnk/errors.hpp"
#include "qnk/pqc.hpp"

using namespace qnk;
using namespace qnk::pqc;
using qsim::DensityMatrix;
using qsim::Matrix;
using qsim::PureState;

namespace {

const char* gate_names(FamilyId id) {
  switch (id) {
    case FamilyId::PQC1: return "XZ";
    case FamilyId::PQC2: return "XY";
    case FamilyId::PQC3: return "XH";
    default: return "YH";
  }
}

// Random mixed state: random convex combination of three random pure states.
DensityMatrix random_density(std::size_t n, Rng& rng) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  Matrix m = Matrix::Zero(dim, dim);
  double w[3];
  double total = 0;
  for (double& x : w) total += (x = rng.uniform01() + 0.05);
  for (double x : w) {
    const PureState p = PureState::random(n, rng);
    m += (x / total) * p.amplitudes() * p.amplitudes().adjoint();
  }
  return DensityMatrix(n, m);
}

oracle::Mat to_oracle(const Matrix& m) {
  oracle::Mat out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return out;
}

// Key average computed with the oracle matrices.
oracle::Mat oracle_average(FamilyId id, const oracle::Mat& rho, std::size_t n) {
  const char* g = gate_names(id);
  oracle::Mat sum(rho.n);
  const std::uint64_t keys = std::uint64_t{1} << (2 * n);
  for (std::uint64_t k = 0; k < keys; ++k) {
    const std::uint64_t alpha = k >> n, beta = k & ((1u << n) - 1);
    oracle::Mat u = oracle::identity(1);
    for (std::size_t q = 0; q < n; ++q) {
      const int a = (alpha >> (n - 1 - q)) & 1, b = (beta >> (n - 1 - q)) & 1;
      u = oracle::kron(u, oracle::key_gate(g[0], g[1], a, b));
    }
    sum = oracle::add(sum, oracle::mul(oracle::mul(u, rho), oracle::adjoint(u)));
  }
  for (auto& v : sum.a) v /= static_cast<double>(keys);
  return sum;
}

}  // namespace

TEST_CASE("family parsing") {
  CHECK(PqcFamily::parse("PQC2").id == FamilyId::PQC2);
  CHECK(PqcFamily::parse("pqc4").u1.kind == qsim::GateKind::Y);
  CHECK_THROWS_AS(PqcFamily::parse("pqc5"), ArgumentError);
  CHECK(named_families().size() == 4);
}

TEST_CASE("key indexing round-trips") {
  for (std::uint64_t k = 0; k < 64; ++k) CHECK(key_index(key_from_index(3, k)) == k);
  const PqcKey key = key_from_index(2, 0b1001);
  CHECK(key.alpha.str() == "10");
  CHECK(key.beta.str() == "01");
}

TEST_CASE("key unitaries match the oracle product") {
  for (const auto& fam : named_families()) {
    const char* g = gate_names(fam.id);
    for (std::uint64_t k = 0; k < 16; ++k) {
      const PqcKey key = key_from_index(2, k);
      const auto ref = oracle::kron(
          oracle::key_gate(g[0], g[1], key.alpha.at(0), key.beta.at(0)),
          oracle::key_gate(g[0], g[1], key.alpha.at(1), key.beta.at(1)));
      CHECK(oracle::max_abs(oracle::add(to_oracle(key_unitary(fam, key)), ref, -1.0)) < 1e-14);
    }
  }
}

TEST_CASE("encrypt then decrypt is the identity") {
  Rng rng(4);
  for (const auto& fam : named_families()) {
    for (int t = 0; t < 10; ++t) {
      const PureState psi = PureState::random(3, rng);
      const PqcKey key = sample_key(3, rng);
      const PureState round = pqc_apply(pqc_apply(psi, fam, key, Direction::Encrypt), fam, key,
                                        Direction::Decrypt);
      CHECK(qsim::fidelity(round, psi) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("encryption applies U2 first, then U1") {
  // PQC3 with alpha = beta = 1 maps |0> to X H |0> = |+>, whereas H X |0> = |->.
  const auto fam = PqcFamily::of(FamilyId::PQC3);
  const PureState out = pqc_apply(PureState::zero(1), fam, key_from_index(1, 0b11), Direction::Encrypt);
  CHECK(out.amplitude(0).real() == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(out.amplitude(1).real() == doctest::Approx(1 / std::sqrt(2.0)));
}

TEST_CASE("PQC3 key average of |0><0| by hand") {
  // Keys I, H, X, XH send |0> to |0>, |+>, |1>, |+>.
  const auto avg = perfect_encryption_average(PqcFamily::of(FamilyId::PQC3),
                                              qsim::to_density(PureState::zero(1)));
  CHECK(avg(0, 0).real() == doctest::Approx(0.5));
  CHECK(avg(1, 1).real() == doctest::Approx(0.5));
  CHECK(avg(0, 1).real() == doctest::Approx(0.25));
  CHECK(avg(1, 0).real() == doctest::Approx(0.25));
  // Eigenvalues of avg - I/2 are +-1/4.
  CHECK(qsim::trace_distance(avg, qsim::maximally_mixed(1)) == doctest::Approx(0.25));
}

TEST_CASE("key averages agree with the oracle for every family") {
  Rng rng(8);
  for (const auto& fam : named_families()) {
    for (std::size_t n : {1, 2}) {
      const DensityMatrix rho = random_density(n, rng);
      const auto ref = oracle_average(fam.id, to_oracle(rho.entries()), n);
      const auto got = perfect_encryption_average(fam, rho);
      CHECK(oracle::max_abs(oracle::add(to_oracle(got.entries()), ref, -1.0)) < 1e-13);
    }
  }
}

TEST_CASE("parallel key average equals the serial one") {
  Rng rng(12);
  const DensityMatrix rho = random_density(3, rng);
  const auto fam = PqcFamily::of(FamilyId::PQC4);
  const auto a = perfect_encryption_average(fam, rho, 1);
  const auto b = perfect_encryption_average(fam, rho, 3);
  CHECK((a.entries() - b.entries()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(perfect_encryption_average(fam, qsim::maximally_mixed(5)), ResourceLimitError);
}

TEST_CASE("orthonormal basis check against the Hilbert-Schmidt Gram oracle") {
  for (const auto& fam : named_families()) {
    const char* g = gate_names(fam.id);
    std::vector<oracle::Mat> basis;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) basis.push_back(oracle::key_gate(g[0], g[1], a, b));
    bool ortho = true;
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        const auto gij = oracle::trace(oracle::mul(oracle::adjoint(basis[i]), basis[j])) / 2.0;
        ortho = ortho && std::abs(gij - (i == j ? 1.0 : 0.0)) < 1e-12;
      }
    }
    const auto rep = orthonormal_basis_check(fam);
    CHECK(rep.orthonormal == ortho);
    CHECK(rep.orthonormal == (fam.id != FamilyId::PQC3));
    CHECK(anticommutation_check(fam) == (fam.id != FamilyId::PQC3));
  }
}

TEST_CASE("basis decomposition reconstructs rho") {
  Rng rng(13);
  for (const auto& fam : named_families()) {
    const DensityMatrix rho = random_density(2, rng);
    if (fam.id == FamilyId::PQC3) {
      CHECK_THROWS_AS(basis_decompose(rho, fam), PreconditionError);
      continue;
    }
    const auto coeffs = basis_decompose(rho, fam);
    CHECK(std::abs(coeffs.at_index(0) - 0.25) < 1e-12);  // tr(rho) / 2^n
    CHECK((basis_reconstruct(coeffs, fam) - rho.entries()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("verifier report") {
  const auto rep = verify_family(PqcFamily::of(FamilyId::PQC3), 1);
  CHECK(!rep.orthonormal);
  CHECK(!rep.anticommute);
  CHECK(rep.trace_distance_to_mixed > 0.2);
  for (FamilyId id : {FamilyId::PQC1, FamilyId::PQC2, FamilyId::PQC4}) {
    const auto ok = verify_family(PqcFamily::of(id), 2);
    CHECK(ok.orthonormal);
    CHECK(ok.anticommute);
    CHECK(ok.trace_distance_to_mixed <= 1e-9);
  }
  const auto j = to_json(rep);
  CHECK(j.begin().key() == "family");
}

TEST_CASE("custom families go through the same checks") {
  const auto fam = PqcFamily::custom("ZX", qsim::Gate::of(qsim::GateKind::Z), qsim::Gate::of(qsim::GateKind::X));
  CHECK(orthonormal_basis_check(fam).orthonormal);
  CHECK(anticommutation_check(fam));
}
