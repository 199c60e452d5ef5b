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

// Acceptance gate: one PASS/FAIL line per criterion.
//
//   qnk_acceptance              run all criteria
//   qnk_acceptance --criterion K run criterion K only
//
// Exit status is 0 only if every selected criterion passed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "qnk/adversary.hpp"
#include "qnk/analysis.hpp"
#include "qnk/boolperm.hpp"
#include "qnk/parallel.hpp"
#include "qnk/pqc.hpp"
#include "qnk/protocol.hpp"
#include "qnk/qsim.hpp"

using namespace qnk;

namespace {

constexpr double kTraceTol = 1e-9;
constexpr double kBornTol = 1e-9;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Verdict()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double binomial_sigma(double p, std::size_t trials) {
  return std::sqrt(p * (1 - p) / static_cast<double>(trials));
}

protocol::SessionConfig config(std::size_t n, pqc::FamilyId id = pqc::FamilyId::PQC4) {
  protocol::SessionConfig cfg;
  cfg.n = n;
  cfg.family = pqc::PqcFamily::of(id);
  return cfg;
}

// Random mixed state: reduce a random pure state on 2n qubits to its first n.
qsim::DensityMatrix random_mixed(std::size_t n, Rng& rng) {
  const auto joint = qsim::to_density(qsim::PureState::random(2 * n, rng));
  std::vector<std::size_t> keep(n);
  for (std::size_t q = 0; q < n; ++q) keep[q] = q;
  return qsim::partial_trace_qubits(joint, keep);
}

// ---------------------------------------------------------------------------

Verdict perfect_encryption() {
  Verdict v;
  Rng rng(101);
  double worst = 0;
  for (pqc::FamilyId id : {pqc::FamilyId::PQC1, pqc::FamilyId::PQC2, pqc::FamilyId::PQC4}) {
    const auto fam = pqc::PqcFamily::of(id);
    for (std::size_t n : {1, 2, 3}) {
      for (int t = 0; t < 20; ++t) {
        const auto avg = pqc::perfect_encryption_average(fam, random_mixed(n, rng), worker_count());
        worst = std::max(worst, qsim::trace_distance(avg, qsim::maximally_mixed(n)));
      }
    }
  }
  v.require(worst <= kTraceTol, "max trace distance " + fmt("%.3g", worst) + " > 1e-9");
  v.note("PQC1/2/4 n=1..3 x20 max_td=" + fmt("%.3g", worst));
  const auto pqc3 = pqc::PqcFamily::of(pqc::FamilyId::PQC3);
  const bool ortho = pqc::orthonormal_basis_check(pqc3).orthonormal;
  const bool anti = pqc::anticommutation_check(pqc3);
  v.require(!ortho, "PQC3 passed the orthonormal check");
  v.require(!anti, "PQC3 passed the anticommutation check");
  v.note(std::string("PQC3 orthonormal=") + (ortho ? "true" : "false") +
         " anticommute=" + (anti ? "true" : "false"));
  return v;
}

Verdict protocol_correctness() {
  Verdict v;
  std::size_t sessions = 0;
  double worst_born = 0;
  for (std::size_t n : {2, 4, 6}) {
    Rng rng(200 + n);
    const auto secret = protocol::AuthSecret::random(n, rng);
    std::vector<BitString> xs;
    for (int k = 0; k < 100; ++k) xs.push_back(rng.bits(n));
    // Session k runs with the r produced by session k-1.
    const auto trs = protocol::run_chained(config(n), secret, xs, 100, rng);
    BitString previous_r = secret.r;
    std::size_t rotations = 0;
    for (std::size_t k = 0; k < trs.size(); ++k) {
      const auto& t = trs[k];
      ++sessions;
      if (t.aborted()) {
        v.require(false, "n=" + std::to_string(n) + " session " + std::to_string(k) + " aborted");
        continue;
      }
      v.require(*t.final_plaintext == xs[k], "n=" + std::to_string(n) + " session " +
                                                 std::to_string(k) + " decrypted the wrong plaintext");
      for (const auto& c : t.checks) worst_born = std::max(worst_born, std::abs(1.0 - c.born_weight));
      v.require(t.updated_r.width() == previous_r.width(), "nonce width changed");
      if (!(t.updated_r == previous_r)) ++rotations;
      previous_r = t.updated_r;
    }
    v.require(rotations > 0, "r never advanced at n=" + std::to_string(n));
  }
  v.require(worst_born <= kBornTol, "Born weight off by " + fmt("%.3g", worst_born));
  v.note(std::to_string(sessions) + " chained sessions at n=2,4,6; max |1-born|=" + fmt("%.3g", worst_born));
  return v;
}

Verdict adversary_view() {
  Verdict v;
  double worst = 0;
  for (int round = 1; round <= 3; ++round) {
    for (std::uint64_t x = 0; x < 4; ++x) {
      const auto view = analysis::adversary_view(round, BitString(2, x), config(2), worker_count());
      worst = std::max(worst, view.report.trace_distance_to_mixed);
    }
  }
  v.require(worst <= kTraceTol, "max trace distance " + fmt("%.3g", worst) + " > 1e-9");
  v.note("n=2 rounds 1-3 x 4 plaintexts, max_td=" + fmt("%.3g", worst));
  return v;
}

Verdict mim_dichotomy() {
  Verdict v;
  const auto pqc4 = pqc::PqcFamily::of(pqc::FamilyId::PQC4);
  {
    Rng rng(401);
    const auto mim = adversary::mim_unauthenticated(config(8), pqc4, std::nullopt, 100, rng);
    v.require(mim.success_rate() == 1.0, "MIM rate " + fmt("%.4f", mim.success_rate()));
    v.note("mim-unauth rate=" + fmt("%.4f", mim.success_rate()));
  }
  const std::size_t trials = 1000;
  const double p = std::pow(2.0, -4.0);
  const double bound = p + 3 * binomial_sigma(p, trials);
  for (auto strategy : {adversary::ForgeStrategy::Reflect, adversary::ForgeStrategy::RandomState,
                        adversary::ForgeStrategy::WrongS}) {
    const std::string name(adversary::strategy_name(strategy));
    Rng rng(402);
    const auto sampled = adversary::forge_authenticated(config(8), strategy, trials, rng);
    v.require(sampled.success_rate() <= bound,
              name + " n=8 rate " + fmt("%.4f", sampled.success_rate()) + " > " + fmt("%.4f", bound));
    const auto exact = adversary::forge_authenticated_exhaustive(strategy);
    v.require(*exact.exact_rate <= 0.5 + 1e-12, name + " n=2 exact rate " + fmt("%.4f", *exact.exact_rate));
    v.note(name + " n=8=" + fmt("%.4f", sampled.success_rate()) + " n=2 exact=" +
           fmt("%.4f", *exact.exact_rate));
  }
  v.note("bound n=8 " + fmt("%.4f", bound) + ", n=2 0.5");
  return v;
}

Verdict basis_measure() {
  Verdict v;
  const std::size_t n = 8, trials = 100;
  for (pqc::FamilyId id : {pqc::FamilyId::PQC1, pqc::FamilyId::PQC2}) {
    const auto fam = pqc::PqcFamily::of(id);
    Rng rng(501);
    const auto out = adversary::basis_measure_attack(config(n, id), fam, std::nullopt, trials, rng);
    v.require(out.success_rate() == 1.0, fam.name + " rate " + fmt("%.4f", out.success_rate()));
    v.require(*out.receiver_correct == trials, fam.name + " disturbed Bob");
    v.note(fam.name + " rate=" + fmt("%.4f", out.success_rate()) + " bob_ok=" +
           std::to_string(*out.receiver_correct));
  }
  const auto pqc4 = pqc::PqcFamily::of(pqc::FamilyId::PQC4);
  Rng rng(502);
  const auto out = adversary::basis_measure_attack(config(n), pqc4, std::nullopt, trials, rng);
  const double p = std::pow(2.0, -static_cast<double>(n));
  const double bound = p + 3 * binomial_sigma(p, trials);
  v.require(out.success_rate() <= bound,
            "PQC4 rate " + fmt("%.4f", out.success_rate()) + " > " + fmt("%.4f", bound) +
                " (per-qubit success is 3/4, so (3/4)^8=" + fmt("%.4f", std::pow(0.75, 8.0)) + " is expected)");
  v.note("PQC4 rate=" + fmt("%.4f", out.success_rate()));
  return v;
}

Verdict property_suites() {
  Verdict v;
  using qsim::Gate;
  using qsim::GateKind;
  const auto x = Gate::of(GateKind::X).matrix, y = Gate::of(GateKind::Y).matrix,
             z = Gate::of(GateKind::Z).matrix, h = Gate::of(GateKind::H).matrix;
  for (const auto& g : {x, y, z, h}) {
    v.require((g.adjoint() * g - qsim::Matrix2::Identity()).norm() <= qsim::kAlgebraTol, "gate not unitary");
  }
  v.require((x * z + z * x).norm() <= qsim::kAlgebraTol, "XZ+ZX != 0");
  v.require((x * y + y * x).norm() <= qsim::kAlgebraTol, "XY+YX != 0");
  v.require((y * h + h * y).norm() <= qsim::kAlgebraTol, "YH+HY != 0");
  v.require((x * h + h * x).norm() > qsim::kAlgebraTol, "XH+HX == 0");

  Rng rng(601);
  for (int t = 0; t < 200; ++t) {
    auto s = qsim::PureState::random(6, rng);
    s = qsim::apply_gate_layer(s, Gate::of(GateKind::H), rng.bits(6));
    s = qsim::apply_gate_layer(s, Gate::of(GateKind::Y), rng.bits(6));
    v.require(std::abs(s.norm_squared() - 1) <= qsim::kStructuralTol, "norm drift");
    const auto rho = qsim::to_density(s);
    v.require(std::abs(rho.entries().trace() - 1.0) <= qsim::kStructuralTol, "trace != 1");
    v.require(rho.min_eigenvalue() >= -qsim::kStructuralTol, "negative eigenvalue");
  }

  std::size_t keys = 0;
  for (std::size_t n : {2, 4}) {
    for (std::uint64_t s = 0; s < (1u << n); ++s, ++keys) {
      v.require(boolperm::verify_bijection(boolperm::PermKey(BitString(n, s)), n),
                "F_s not bijective at n=" + std::to_string(n));
    }
  }
  for (std::size_t n : {8, 16}) {
    for (int t = 0; t < 100; ++t, ++keys) {
      v.require(boolperm::verify_bijection(boolperm::PermKey(rng.bits(n)), n),
                "F_s not bijective at n=" + std::to_string(n));
    }
  }

  const std::size_t n = 4;
  const auto layout = qsim::RegisterLayout::sequential({{qsim::RegisterId::I, n}, {qsim::RegisterId::II, n}});
  std::size_t states = 0;
  for (int t = 0; t < 1000; ++t, ++states) {
    const boolperm::PermKey key(rng.bits(n));
    const BitString tag = rng.bits(n);
    const auto joint = qsim::tensor(qsim::PureState::random(n, rng), qsim::PureState::basis(tag));
    const auto once = boolperm::apply_us(joint, layout, key, qsim::RegisterId::I, qsim::RegisterId::II);
    const auto twice = boolperm::apply_us(once, layout, key, qsim::RegisterId::I, qsim::RegisterId::II);
    v.require((twice.amplitudes() - joint.amplitudes()).norm() <= qsim::kAlgebraTol, "U_s not self-inverse");
    const auto probs = qsim::register_distribution(twice, layout, qsim::RegisterId::II);
    v.require(std::abs(probs[tag.value()] - 1.0) <= qsim::kStructuralTol, "U_s did not disentangle");
  }
  v.note("gate algebra, 200 random circuits, " + std::to_string(keys) + " keys bijective, " +
         std::to_string(states) + " U_s states");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "perfect-encryption", 30, perfect_encryption},
      {2, "protocol-correctness", 10, protocol_correctness},
      {3, "adversary-view", 300, adversary_view},
      {4, "mim-dichotomy", 60, mim_dichotomy},
      {5, "basis-measure", 60, basis_measure},
      {6, "property-suites", 30, property_suites},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion K]\n", argv[0]);
      return 1;
    }
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "criterion must be 1..%zu\n", criteria.size());
    return 1;
  }

  bool all = true;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.require(secs < c.budget_seconds, "runtime " + fmt("%.1f", secs) + " s over budget");
    std::printf("%s criterion %d %s: %s [%.2f s, budget %.0f s]\n", v.pass ? "PASS" : "FAIL", c.id,
                c.name, v.detail.c_str(), secs, c.budget_seconds);
    std::fflush(stdout);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
