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

#include "qnk/cli.hpp"

#include <chrono>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "qnk/adversary.hpp"
#include "qnk/analysis.hpp"
#include "qnk/boolperm.hpp"
#include "qnk/errors.hpp"
#include "qnk/parallel.hpp"
#include "qnk/pqc.hpp"
#include "qnk/protocol.hpp"
#include "qnk/report.hpp"

namespace qnk::cli {

namespace {

using nlohmann::ordered_json;

// Stream ids for the independent random sources of one `run`.
constexpr std::uint64_t kSecretStream = 0x736563726574ULL;
constexpr std::uint64_t kEveStream = 0x657665ULL;

struct RunArgs {
  std::size_t n = 4;
  std::string pqc = "pqc4";
  std::string plaintext;
  std::uint64_t seed = 0;
  std::size_t sessions = 1;
  std::string attack = "none";
  std::string trace;
};

struct VerifyArgs {
  std::string family;
  std::size_t n = 1;
  std::uint64_t seed = 0;
  std::string report = "-";
};

struct AttackArgs {
  std::string type;
  std::string pqc = "pqc4";
  std::size_t n = 8;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::string report;
  std::string strategy = "reflect";
  std::string plaintext;
  bool exhaustive = false;
};

struct ViewArgs {
  int round = 1;
  std::size_t n = 2;
  std::string plaintext;
  std::string pqc = "pqc4";
  bool exhaustive = false;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string report;
  std::string joint_with;
  bool timing = false;
};

BitString parse_plaintext(const std::string& text, std::size_t n) {
  const BitString x = BitString::parse(text);
  if (x.width() != n) {
    throw ArgumentError("plaintext '" + text + "' must have " + std::to_string(n) + " bits");
  }
  return x;
}

protocol::SessionConfig session_config(std::size_t n, const std::string& family, std::uint64_t seed) {
  protocol::SessionConfig cfg;
  cfg.n = n;
  cfg.family = pqc::PqcFamily::parse(family);
  cfg.seed = seed;
  return cfg;
}

// Eve's interception hook for `run --attack NAME`.
protocol::Hook make_run_hook(const std::string& attack, const protocol::SessionConfig& cfg) {
  if (attack == "none") return {};
  auto eve = std::make_shared<Rng>(cfg.seed, kEveStream);
  if (attack == "basis-measure") {
    return [eve](const protocol::WireMessage& msg) {
      const auto m = qsim::measure_register(msg.payload, msg.layout, qsim::RegisterId::I, *eve);
      return protocol::WireMessage{msg.round, m.post_state, msg.layout};
    };
  }
  const adversary::ForgeStrategy strategy = adversary::parse_strategy(attack);
  auto captured = std::make_shared<std::optional<protocol::WireMessage>>();
  return [eve, captured, strategy, cfg](const protocol::WireMessage& msg) {
    if (msg.round == 1) {
      *captured = msg;
      return msg;
    }
    if (msg.round == 2 && captured->has_value()) {
      const BitString guess = eve->bits(cfg.n);
      return adversary::forge_round2(strategy, **captured, guess, cfg.family, *eve);
    }
    return msg;
  };
}

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  const auto cfg = session_config(a.n, a.pqc, a.seed);
  cfg.validate();
  const BitString x = parse_plaintext(a.plaintext, a.n);
  if (a.sessions == 0) throw ArgumentError("--sessions must be at least 1");

  Rng secret_rng(a.seed, kSecretStream);
  const auto secret = protocol::AuthSecret::random(a.n, secret_rng);
  Rng rng(a.seed);
  const auto transcripts =
      protocol::run_chained(cfg, secret, {x}, a.sessions, rng, make_run_hook(a.attack, cfg));

  std::vector<ordered_json> records;
  bool aborted = false;
  std::ostream& summary = a.trace == "-" ? err : out;
  for (std::size_t k = 0; k < transcripts.size(); ++k) {
    const auto& t = transcripts[k];
    for (const auto& rec : protocol::trace_records(t)) {
      ordered_json tagged;
      tagged["session"] = k;
      for (const auto& [key, value] : rec.items()) tagged[key] = value;
      records.push_back(std::move(tagged));
    }
    summary << "session " << k << ": "
        << (t.final_plaintext ? "final=" + t.final_plaintext->str()
                              : "ABORT at round " + std::to_string(*t.aborted_at))
        << " updated_r=" << t.updated_r.str() << '\n';
    aborted = aborted || t.aborted();
  }
  report::write_jsonl(a.trace, records);
  return aborted ? kExitAbort : kExitOk;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const auto family = pqc::PqcFamily::parse(a.family);
  const auto rep = pqc::verify_family(family, a.n, a.seed);
  report::write_json(a.report, pqc::to_json(rep));
  if (a.report != "-") {
    out << family.name << " n=" << a.n << " orthonormal=" << rep.orthonormal
        << " anticommute=" << rep.anticommute << '\n';
  }
  return kExitOk;
}

int cmd_attack(const AttackArgs& a, std::ostream& out) {
  auto cfg = session_config(a.n, a.pqc, a.seed);
  std::optional<BitString> x;
  if (!a.plaintext.empty()) x = parse_plaintext(a.plaintext, a.n);
  Rng rng(a.seed);
  adversary::AttackOutcome outcome;
  if (a.type == "mim-unauth") {
    outcome = adversary::mim_unauthenticated(cfg, cfg.family, x, a.trials, rng);
  } else if (a.type == "forge-auth") {
    const auto strategy = adversary::parse_strategy(a.strategy);
    if (a.exhaustive) {
      if (a.n != 2) throw ResourceLimitError("exhaustive forgery evaluation is only available at n = 2");
      outcome = adversary::forge_authenticated_exhaustive(strategy, cfg.family, 16, a.seed);
    } else {
      cfg.validate();
      outcome = adversary::forge_authenticated(cfg, strategy, a.trials, rng);
    }
  } else if (a.type == "basis-measure") {
    outcome = adversary::basis_measure_attack(cfg, cfg.family, x, a.trials, rng);
  } else {
    throw ArgumentError("unknown attack type '" + a.type + "'");
  }
  report::write_json(a.report, adversary::to_json(outcome));
  if (a.report != "-") {
    out << outcome.attack << " " << outcome.family << " success_rate=" << outcome.success_rate()
        << '\n';
  }
  return kExitOk;
}

int cmd_view(const ViewArgs& a, std::ostream& out) {
  const auto cfg = session_config(a.n, a.pqc, a.seed);
  const BitString x = parse_plaintext(a.plaintext, a.n);
  if (!a.joint_with.empty()) {
    const BitString other = parse_plaintext(a.joint_with, a.n);
    const auto rep = analysis::joint_view_estimate(x, other, cfg, a.samples, a.seed);
    report::write_json(a.report, analysis::to_json(rep));
    if (a.report != "-") {
      out << "joint view (exploratory) estimate=" << rep.estimate
          << " standard_error=" << rep.standard_error << '\n';
    }
    return kExitOk;
  }
  if (a.exhaustive == (a.samples > 0)) {
    throw ArgumentError("view needs exactly one of --exhaustive or --samples K");
  }
  const std::size_t workers = worker_count();
  const auto result = a.exhaustive
                          ? analysis::adversary_view(a.round, x, cfg, workers)
                          : analysis::adversary_view_sampled(a.round, x, cfg, a.samples, a.seed, workers);
  ordered_json doc = analysis::to_json(result.report, a.timing);
  if (a.n <= 2) {
    doc["density"] = qsim::to_json(qsim::DensityMatrix(2 * a.n, result.density));
  }
  report::write_json(a.report, doc);
  if (a.report != "-") {
    out << "round " << a.round << " trace_distance_to_mixed="
        << result.report.trace_distance_to_mixed << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// selftest

int cmd_selftest(std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  int failures = 0;
  auto line = [&](bool ok, const std::string& what) {
    out << (ok ? "ok   " : "FAIL ") << what << '\n';
    if (!ok) ++failures;
  };

  for (const auto& family : pqc::named_families()) {
    const auto rep = pqc::verify_family(family, 1, 0);
    const bool basis = family.id != pqc::FamilyId::PQC3;
    const bool ok = rep.orthonormal == basis && rep.anticommute == basis &&
                    (!basis || rep.trace_distance_to_mixed <= qsim::kStructuralTol);
    std::ostringstream what;
    what << "pqc " << family.name << " n=1 orthonormal=" << rep.orthonormal
         << " anticommute=" << rep.anticommute << " td=" << rep.trace_distance_to_mixed;
    line(ok, what.str());
  }

  for (const std::size_t n : {2, 4}) {
    bool all = true;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
      all = all && boolperm::verify_bijection(boolperm::PermKey(BitString(n, s)), n);
    }
    line(all, "boolperm bijective for every s at n=" + std::to_string(n));
  }

  for (const std::size_t n : {2, 4, 6}) {
    protocol::SessionConfig cfg;
    cfg.n = n;
    Rng rng(n);
    const auto secret = protocol::AuthSecret::random(n, rng);
    const BitString x = rng.bits(n);
    const auto t = protocol::run_session(cfg, secret, x, rng);
    line(!t.aborted() && t.final_plaintext == x,
         "honest session n=" + std::to_string(n) + " x=" + x.str());
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << (failures == 0 ? "selftest passed" : "selftest FAILED") << " (" << seconds << " s)\n";
  return failures == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum no-key protocol simulator and security workbench", "qnk"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run authenticated sessions and write a JSONL trace");
  run_cmd->add_option("--n", run.n, "Plaintext width (even)")->required();
  run_cmd->add_option("--pqc", run.pqc, "PQC family: pqc1|pqc2|pqc3|pqc4")->required();
  run_cmd->add_option("--plaintext", run.plaintext, "Plaintext bit string")->required();
  run_cmd->add_option("--seed", run.seed, "RNG seed")->required();
  run_cmd->add_option("--sessions", run.sessions, "Chained sessions (r <- r_C)");
  run_cmd->add_option("--attack", run.attack,
                      "none|reflect|random-state|wrong-s|basis-measure");
  run_cmd->add_option("--trace", run.trace, "Trace output (JSONL)")->required();

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify-pqc", "Check a PQC family");
  verify_cmd->add_option("--family", verify.family, "pqc1|pqc2|pqc3|pqc4")->required();
  verify_cmd->add_option("--n", verify.n, "Qubits (1..4)")->required();
  verify_cmd->add_option("--seed", verify.seed, "Seed for the random probe states");
  verify_cmd->add_option("--report", verify.report, "Report output (JSON, default stdout)");

  AttackArgs attack;
  auto* attack_cmd = app.add_subcommand("attack", "Run an adversary batch");
  attack_cmd->add_option("--type", attack.type, "mim-unauth|forge-auth|basis-measure")->required();
  attack_cmd->add_option("--pqc", attack.pqc, "PQC family")->required();
  attack_cmd->add_option("--n", attack.n, "Width")->required();
  attack_cmd->add_option("--trials", attack.trials, "Trials")->required();
  attack_cmd->add_option("--seed", attack.seed, "RNG seed")->required();
  attack_cmd->add_option("--report", attack.report, "Report output (JSON)")->required();
  attack_cmd->add_option("--strategy", attack.strategy, "forge-auth: reflect|random-state|wrong-s");
  attack_cmd->add_option("--plaintext", attack.plaintext, "Fixed plaintext (default: random per trial)");
  attack_cmd->add_flag("--exhaustive", attack.exhaustive, "forge-auth: exact evaluation at n=2");

  ViewArgs view;
  auto* view_cmd = app.add_subcommand("view", "Adversary view of one round");
  view_cmd->add_option("--round", view.round, "Round 1..3")->required();
  view_cmd->add_option("--n", view.n, "Width")->required();
  view_cmd->add_option("--plaintext", view.plaintext, "Plaintext bit string")->required();
  view_cmd->add_option("--pqc", view.pqc, "PQC family (default pqc4)");
  view_cmd->add_flag("--exhaustive", view.exhaustive, "Exact average (n <= 2)");
  view_cmd->add_option("--samples", view.samples, "Monte-Carlo samples");
  view_cmd->add_option("--seed", view.seed, "RNG seed for sampling");
  view_cmd->add_option("--joint-with", view.joint_with,
                       "Exploratory: compare joint three-message views with this plaintext");
  view_cmd->add_flag("--timing", view.timing, "Include runtime in the report");
  view_cmd->add_option("--report", view.report, "Report output (JSON)")->required();

  auto* selftest_cmd = app.add_subcommand("selftest", "Quick invariant suite");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitFailure;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run, out, err);
    if (verify_cmd->parsed()) return cmd_verify(verify, out);
    if (attack_cmd->parsed()) return cmd_attack(attack, out);
    if (view_cmd->parsed()) return cmd_view(view, out);
    if (selftest_cmd->parsed()) return cmd_selftest(out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace qnk::cli
