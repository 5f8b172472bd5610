// qrlab command line: verification suites, commitment runs, attacks,
// distillation certificate checks, and the locked-entanglement demo.
//
// Exit codes: 0 pass, 1 check failure, 2 usage or I/O error.

#include "qrlab/bounds.hpp"
#include "qrlab/commitment.hpp"
#include "qrlab/epfi.hpp"
#include "qrlab/io.hpp"
#include "qrlab/locc.hpp"
#include "qrlab/suite.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace qrlab;

int write_out(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    return 2;
  }
  out << text;
  return 0;
}

int run_suites(SuiteConfig config) {
  try {
    Report report = run_suite(config);
    std::cout << report.to_text();
    if (!config.out_path.empty()) {
      int rc = write_out(config.out_path, report.to_json());
      if (rc != 0) return rc;
    }
    return report.all_passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

EpfiPair load_pair(const std::string& left_path, const std::string& right_path,
                   double delta) {
  KeyedEnsemble left = load_ensemble(left_path);
  KeyedEnsemble right = load_ensemble(right_path);
  if (delta < 0.0) {
    EpfiPair probe(left, right, 0.0);
    delta = verify_pairwise_far(probe).min_delta;
  }
  return EpfiPair(std::move(left), std::move(right), delta);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale laboratory for entanglement measures, pairwise-far "
               "state families, and canonical commitments"};
  app.require_subcommand(1);

  std::uint64_t seed = 42;
  int max_dim = 16;
  std::string out_path;
  app.add_option("--seed", seed, "random seed for deterministic runs");
  app.add_option("--max-dim", max_dim, "largest Hilbert-space dimension");
  app.add_option("--out", out_path, "write machine-readable output to this path");

  std::vector<std::string> suites;
  std::vector<std::string> tol_overrides;
  bool inject_violation = false;

  auto add_suite_cmd = [&](const char* name, const char* help) {
    CLI::App* cmd = app.add_subcommand(name, help);
    cmd->fallthrough();
    return cmd;
  };

  CLI::App* cmd_bounds = add_suite_cmd("verify-bounds",
                                       "run the continuity/amplification bound suite");
  CLI::App* cmd_epfi = add_suite_cmd("verify-epfi",
                                     "run the pairwise-far family construction suite");
  CLI::App* cmd_report = add_suite_cmd("report", "run verification suites");
  cmd_report->add_option("--suite", suites, "suite name (repeatable); default all");
  cmd_report->add_option("--tol", tol_overrides,
                         "tolerance override name=value (repeatable)");
  cmd_report->add_flag("--inject-violation", inject_violation,
                       "add a deliberately failing check (harness self-test)");

  // commit
  CLI::App* cmd_commit = add_suite_cmd("commit", "commit to a bit with a keyed scheme");
  std::string left_path, right_path;
  double delta_opt = -1.0;
  int bit = 0, copies = 1;
  std::uint32_t key = 0, key_other = 0;
  cmd_commit->add_option("--left", left_path, "bit-0 ensemble file")->required();
  cmd_commit->add_option("--right", right_path, "bit-1 ensemble file")->required();
  cmd_commit->add_option("--delta", delta_opt,
                         "certified pairwise distance (default: computed sweep)");
  cmd_commit->add_option("--bit", bit, "committed bit")->check(CLI::Range(0, 1));
  cmd_commit->add_option("--key", key, "key value");
  cmd_commit->add_option("--copies", copies, "copy count m");

  // attack
  CLI::App* cmd_attack = add_suite_cmd(
      "attack", "optimal opening attack against an ensemble-built scheme");
  cmd_attack->add_option("--left", left_path, "bit-0 ensemble file")->required();
  cmd_attack->add_option("--right", right_path, "bit-1 ensemble file")->required();
  cmd_attack->add_option("--delta", delta_opt, "certified pairwise distance");
  cmd_attack->add_option("--key", key, "commit key (bit 0)");
  cmd_attack->add_option("--key-other", key_other, "reveal key (bit 1)");
  cmd_attack->add_option("--copies", copies, "copy count m");

  // distill
  CLI::App* cmd_distill = add_suite_cmd(
      "distill", "check a distillation certificate for a family and circuit");
  std::string family_path, circuit_path;
  int target_m = 1, key_bits = 0;
  double eps = 0.0;
  cmd_distill->add_option("--family", family_path, "keyed ensemble file")->required();
  cmd_distill->add_option("--circuit", circuit_path, "circuit file")->required();
  cmd_distill->add_option("--target-m", target_m, "output Bell pairs");
  cmd_distill->add_option("--eps", eps, "allowed deficit");
  cmd_distill->add_option("--key-bits", key_bits,
                          "key register width (0: key-oblivious circuit)");

  // locked-demo
  CLI::App* cmd_locked = add_suite_cmd("locked-demo",
                                            "key-locked entanglement demonstration");
  int n_pairs = 1;
  cmd_locked->add_option("--pairs", n_pairs, "Bell pairs (1 or 2)")->check(CLI::Range(1, 2));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  SuiteConfig config;
  config.seed = seed;
  config.max_dim = max_dim;
  config.out_path = out_path;
  config.inject_violation = inject_violation;
  for (const std::string& ov : tol_overrides) {
    auto pos = ov.find('=');
    if (pos == std::string::npos) {
      std::cerr << "bad --tol (want name=value): " << ov << "\n";
      return 2;
    }
    config.tolerance_overrides[ov.substr(0, pos)] = std::stod(ov.substr(pos + 1));
  }

  try {
    if (cmd_bounds->parsed()) {
      config.suites = {"bounds"};
      return run_suites(config);
    }
    if (cmd_epfi->parsed()) {
      config.suites = {"epfi"};
      return run_suites(config);
    }
    if (cmd_report->parsed()) {
      config.suites = suites.empty() ? all_suites() : suites;
      return run_suites(config);
    }
    if (cmd_commit->parsed()) {
      EpfiPair pair = load_pair(left_path, right_path, delta_opt);
      CommitCircuitFamily scheme = build_from_epfi(pair, copies);
      CommitmentTranscript t = commit(scheme, bit, key, copies);
      double acc = reveal_verify(scheme, t.joint, bit, key, copies);
      std::printf("committed bit %d under key %s with %d copies\n", bit,
                  key_to_bits(key, scheme.key_len()).c_str(), copies);
      std::printf("committed register dim %lld, honest reveal accepts %.12f\n",
                  static_cast<long long>(t.committed.dim()), acc);
      std::printf("hiding (statistical surrogate): %.3e\n",
                  statistical_hiding_of_scheme(scheme, copies));
      return acc >= 1.0 - 1e-9 ? 0 : 1;
    }
    if (cmd_attack->parsed()) {
      EpfiPair pair = load_pair(left_path, right_path, delta_opt);
      CommitCircuitFamily scheme = build_from_epfi(pair, copies);
      AttackResult attack = optimal_opening_attack(scheme, key, key_other, copies);
      double bound =
          binding_fidelity_bound(copies_amplification(pair.certified_delta, copies));
      std::printf("attack success (fidelity): %.12f\n", attack.success_prob);
      std::printf("achieved by constructed unitary: %.12f\n", attack.achieved_overlap);
      std::printf("binding ceiling at delta=%.6f, m=%d: %.12f\n", pair.certified_delta,
                  copies, bound);
      bool ok = attack.success_prob <= bound + 1e-6 &&
                std::abs(attack.achieved_overlap - attack.success_prob) <= 1e-6;
      return ok ? 0 : 1;
    }
    if (cmd_distill->parsed()) {
      KeyedEnsemble family = load_ensemble(family_path);
      LoccCircuit circuit = load_circuit(circuit_path);
      DistillationCertificate cert{family, std::nullopt, std::nullopt,
                                   target_m, eps, {}, {}};
      if (key_bits > 0)
        cert.keyed_circuit = KeyedLoccMap(circuit, key_bits);
      else
        cert.plain_circuit = circuit;
      CertificateOutcome out = distillation_deficit(cert);
      for (std::size_t i = 0; i < cert.per_key_deficit.size(); ++i)
        std::printf("key %s: deficit %.12f\n",
                    key_to_bits(family.keys[i], family.key_len).c_str(),
                    cert.per_key_deficit[i]);
      std::printf("max deficit %.12f, eps %.12f -> %s\n", out.max_deficit, eps,
                  out.valid ? "valid" : "invalid");
      return out.valid ? 0 : 1;
    }
    if (cmd_locked->parsed()) {
      LockedDemoReport rep = locked_entanglement_demo(n_pairs);
      std::printf("pairs: %d (keys: %d)\n", rep.n_pairs, rep.num_keys);
      std::printf("with-key distillation deficit (max over keys): %.3e\n",
                  rep.with_key_max_deficit);
      std::printf("key average deviation from maximally mixed: %.3e\n",
                  rep.key_avg_max_dev);
      std::printf("key average partial transpose min eigenvalue: %.3e\n",
                  rep.key_avg_ppt_min_eig);
      std::printf("distinguishing advantage vs reference: %.3e\n", rep.hiding_advantage);
      std::printf("reference family cost deficit at zero Bell input: %.3e\n",
                  rep.reference_cost_deficit);
      std::printf("no-key best fidelity %.9f (bound %.6f) over %lld circuits "
                  "(%lld distinct states)\n",
                  rep.nokey_best_fidelity, rep.nokey_bound, rep.nokey_circuits,
                  rep.nokey_distinct_states);
      std::printf("scope: %s\n", rep.scope_note.c_str());
      bool ok = rep.with_key_max_deficit <= 1e-9 && rep.key_avg_max_dev <= 1e-12 &&
                rep.key_avg_ppt_min_eig >= -1e-12 &&
                rep.nokey_best_fidelity <= rep.nokey_bound + 1e-9;
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
