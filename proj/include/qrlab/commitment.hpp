#pragma once

// Canonical keyed commitments as an executable two-party protocol: commit,
// reveal/verify, construction from pairwise-far ensembles, and the
// purification-alignment opening attack that meets the fidelity ceiling.

#include "qrlab/epfi.hpp"
#include "qrlab/linalg.hpp"

#include <cstdint>
#include <vector>

namespace qrlab {

// Keyed unitary families Q^k_0, Q^k_1 acting on registers (C, R).
class CommitCircuitFamily {
 public:
  CommitCircuitFamily(int key_len, Index dim_c, Index dim_r,
                      std::vector<std::uint32_t> keys0, std::vector<ComplexMatrix> circuits0,
                      std::vector<std::uint32_t> keys1, std::vector<ComplexMatrix> circuits1,
                      int default_copies = 1);

  int key_len() const { return key_len_; }
  Index dim_c() const { return dim_c_; }
  Index dim_r() const { return dim_r_; }
  int default_copies() const { return default_copies_; }
  bool purifications_synthesized() const { return purifications_synthesized_; }

  const std::vector<std::uint32_t>& keys(int bit) const;
  const ComplexMatrix& circuit(int bit, std::uint32_t key) const;

  void mark_synthesized() { purifications_synthesized_ = true; }

 private:
  int key_len_;
  Index dim_c_, dim_r_;
  int default_copies_;
  bool purifications_synthesized_ = false;
  std::vector<std::uint32_t> keys0_, keys1_;
  std::vector<ComplexMatrix> circuits0_, circuits1_;
};

struct CommitmentTranscript {
  int bit = 0;
  std::uint32_t key = 0;
  int copies = 1;
  PureState joint;           // (Q^k_b |0>)^{tensor m} on (C R)^m, copy-interleaved
  DensityMatrix committed;   // reduction onto C^m

  CommitmentTranscript(int b, std::uint32_t k, int m, PureState j, DensityMatrix c,
                       Index dim_c, Index dim_r);
};

struct AttackResult {
  double success_prob = 0.0;      // fidelity of the two committed states
  ComplexMatrix attack_unitary;   // acts on R^m (x) Z only
  Index dim_z = 1;
  double achieved_overlap = 0.0;  // acceptance of the attacked opening
  PureState attacked_state;       // on (C R)^m (x) Z, copy-interleaved
};

// Prepare (Q^k_b |0>)^{tensor m} and its C-side reduction.
CommitmentTranscript commit(const CommitCircuitFamily& scheme, int bit,
                            std::uint32_t key, int copies);

// Projective verification probability |<0| (Q^k_b^dag)^{tensor m} |state>|^2.
// `extra_dim` admits a trailing attacker register that the verifier ignores.
double reveal_verify(const CommitCircuitFamily& scheme, const PureState& transcript_state,
                     int bit, std::uint32_t key, int copies, Index extra_dim = 1);

// Purification-alignment attack converting a commitment to bit 0 under key
// `key` into an opening for bit 1 under `key_other`. The constructed unitary
// touches only R^m (x) Z and achieves the fidelity of the committed states.
AttackResult optimal_opening_attack(const CommitCircuitFamily& scheme, std::uint32_t key,
                                    std::uint32_t key_other, int copies);

// Scheme whose Q^k_0 / Q^k'_1 prepare purifications of the pair's left/right
// states; R is sized to the largest state rank.
CommitCircuitFamily build_from_epfi(const EpfiPair& pair, int copies);

// Trace distance between key-uniform mixtures of committed states for the
// two bits (statistical surrogate for hiding).
double statistical_hiding_of_scheme(const CommitCircuitFamily& scheme, int copies);

// Tensor-factor permutation: output factor j is input factor perm[j].
ComplexVector permute_factors(const ComplexVector& v, const std::vector<Index>& dims,
                              const std::vector<int>& perm);

// Apply a unitary to one factor of a tensor-product space.
ComplexVector apply_on_factor(const ComplexVector& v, const std::vector<Index>& dims,
                              int slot, const ComplexMatrix& u);

// Extend a partial isometry (orthonormal inputs -> orthonormal outputs) to a
// full unitary.
ComplexMatrix extend_to_unitary(const ComplexMatrix& inputs, const ComplexMatrix& outputs);

}  // namespace qrlab
