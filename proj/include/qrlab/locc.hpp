#pragma once

// Round-structured local circuits with a measured communication register:
// exact simulation (measurement as dephasing on C), one-shot distillation
// and cost certificate checking, and the key-locked entanglement demo.

#include "qrlab/linalg.hpp"
#include "qrlab/random.hpp"
#include "qrlab/resource.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qrlab {

enum class GateKind { H, X, Z, S, CNOT, CZ, TOFFOLI };

// controls/targets hold global qubit indices; layout [A, A', B, B', C].
struct Gate {
  GateKind kind;
  std::vector<int> controls;
  std::vector<int> targets;
};

std::string gate_name(GateKind kind);

class LoccCircuit {
 public:
  LoccCircuit(int n_a, int t_a, int n_b, int t_b, int c_bits,
              std::vector<std::vector<Gate>> a_rounds,
              std::vector<std::vector<Gate>> b_rounds, int gate_budget = 64);

  int n_a() const { return n_a_; }
  int t_a() const { return t_a_; }
  int n_b() const { return n_b_; }
  int t_b() const { return t_b_; }
  int c_bits() const { return c_bits_; }
  int rounds() const { return static_cast<int>(a_rounds_.size()); }
  int gate_budget() const { return gate_budget_; }
  int total_qubits() const { return n_a_ + t_a_ + n_b_ + t_b_ + c_bits_; }
  int gate_count() const;

  const std::vector<std::vector<Gate>>& a_rounds() const { return a_rounds_; }
  const std::vector<std::vector<Gate>>& b_rounds() const { return b_rounds_; }

  // Global indices of the register qubits.
  int a_qubit(int i) const { return i; }
  int ap_qubit(int i) const { return n_a_ + i; }
  int b_qubit(int i) const { return n_a_ + t_a_ + i; }
  int bp_qubit(int i) const { return n_a_ + t_a_ + n_b_ + i; }
  int c_qubit(int i) const { return n_a_ + t_a_ + n_b_ + t_b_ + i; }

  Index out_dim_a() const { return Index(1) << (n_a_ + t_a_); }
  Index out_dim_b() const { return Index(1) << (n_b_ + t_b_); }

 private:
  int n_a_, t_a_, n_b_, t_b_, c_bits_;
  std::vector<std::vector<Gate>> a_rounds_, b_rounds_;
  int gate_budget_;
};

// Input is placed on (A : B); ancillas and C start in |0>. Mid-round
// measurements are realized as dephasing on C; the output keeps all
// classical branches as a mixture on (A A' : B B') with C traced out.
BipartiteState apply_locc(const LoccCircuit& circuit, const BipartiteState& input);

// Same map with an inert environment appended (for Choi-matrix checks).
ComplexMatrix apply_locc_with_env(const LoccCircuit& circuit, const ComplexMatrix& rho,
                                  Index env_dim);

// Oracle evaluation for tests: measurements enumerated as explicit classical
// branches, weighted by outcome probability.
BipartiteState apply_locc_branched(const LoccCircuit& circuit, const BipartiteState& input);

// Choi matrix of the induced channel (n_a = n_b = 1 only).
ComplexMatrix locc_choi_matrix(const LoccCircuit& circuit);

// Keyed map: key bits are loaded into the leading qubits of both A' and B'
// before the circuit runs.
struct KeyedLoccMap {
  LoccCircuit base;
  int key_bits = 0;

  KeyedLoccMap(LoccCircuit circuit, int key_bits_count);
};

BipartiteState apply_keyed_locc(const KeyedLoccMap& map, std::uint32_t key,
                                const BipartiteState& input);

struct DistillationCertificate {
  KeyedEnsemble family;
  std::optional<KeyedLoccMap> keyed_circuit;
  std::optional<LoccCircuit> plain_circuit;
  int target_m = 1;
  double eps = 0.0;
  // (a-side qubit, b-side qubit) per output pair, ascending on both sides.
  std::vector<std::pair<int, int>> output_pairs;
  std::vector<double> per_key_deficit;  // filled by distillation_deficit
};

struct CertificateOutcome {
  double max_deficit = 0.0;
  bool valid = false;
};

// Per key: 1 - F(designated output pairs, Phi^{tensor target_m}).
CertificateOutcome distillation_deficit(DistillationCertificate& cert);

// Per key: 1 - F(family state, circuit output restricted to the family's
// registers) with the circuit fed n_in Bell pairs.
CertificateOutcome cost_deficit(const KeyedEnsemble& family, const KeyedLoccMap& circuit,
                                int n_in, double eps, std::vector<double>* per_key = nullptr);

struct LockedDemoReport {
  int n_pairs = 1;
  int num_keys = 4;
  double with_key_max_deficit = 1.0;
  double key_avg_max_dev = 1.0;       // max |avg_k psi_k - I/4^n|
  double key_avg_ppt_min_eig = -1.0;  // min eigenvalue of the partial transpose
  double hiding_advantage = 1.0;      // trace distance of key average to reference
  double reference_cost_deficit = 1.0;
  double nokey_best_fidelity = 1.0;
  double nokey_bound = 0.5;
  long long nokey_circuits = 0;
  long long nokey_distinct_states = 0;
  std::string scope_note;
};

// Pauli-keyed Bell family: with-key distillation, key-average separability,
// statistical hiding, and exhaustive no-key toy-circuit distillation.
LockedDemoReport locked_entanglement_demo(int n_pairs);

// Bell pair (|00> + |11>)/sqrt(2) on the A:B cut, and its m-pair power in
// the [a-block | b-block] register order.
ComplexVector bell_vector();
ComplexVector bell_power_vector(int m);

// Random circuit over the toy gate set, locality-valid by construction.
LoccCircuit random_locc_circuit(Rng& rng, int n_a, int t_a, int n_b, int t_b, int c_bits,
                                int rounds, int gates_per_side);

}  // namespace qrlab
