#pragma once

// Resource theories as free-set oracles: relative entropy of resource with
// two-sided certified brackets, the keyed-ensemble data model, and
// pseudoresource gap certification.

#include "qrlab/bounds.hpp"
#include "qrlab/linalg.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace qrlab {

// Certified bracket on min_{sigma in F} D(rho || sigma), in bits.
struct ResourceBracket {
  double lower = 0.0;
  double upper = 0.0;
  bool converged = true;
  // Free state achieving the upper bound, when the oracle can exhibit one.
  std::optional<DensityMatrix> upper_witness;

  double width() const { return upper - lower; }
};

class FreeSetOracle {
 public:
  virtual ~FreeSetOracle() = default;

  virtual const std::string& name() const = 0;
  virtual Index dim() const = 0;
  virtual ResourceBracket closest_free(const DensityMatrix& rho) const = 0;
  // Upper bound on sup_{tau, tau'} D_F(tau) - D_F(tau').
  virtual double diameter_kappa() const = 0;
  virtual DensityMatrix full_rank_witness() const = 0;
  virtual bool is_free(const DensityMatrix& sigma, double tol) const = 0;
};

// Free set = diagonal states. Exactly solvable: the closest free state is
// diag(rho) and the distance is S(diag rho) - S(rho).
class CoherenceOracle final : public FreeSetOracle {
 public:
  explicit CoherenceOracle(Index dim);

  const std::string& name() const override { return name_; }
  Index dim() const override { return dim_; }
  ResourceBracket closest_free(const DensityMatrix& rho) const override;
  double diameter_kappa() const override;
  DensityMatrix full_rank_witness() const override;
  bool is_free(const DensityMatrix& sigma, double tol) const override;

 private:
  Index dim_;
  std::string name_ = "coherence";
};

struct SeparabilityOptions {
  int seesaw_alternations = 200;
  int seesaw_restarts = 8;
  double seesaw_tol = 1e-7;
  int seesaw_max_atoms = 0;  // 0: full (dA*dB)^2 ansatz
  int pgd_max_iters = 250;
  int dykstra_iters = 15;
  int dual_ascent_iters = 300;
  int line_search_iters = 32;
  double target_width = 0.02;  // stop early once the bracket is this tight
  std::uint64_t seed = 20240517;
};

// Free set = separable states across the A:B cut. Upper bound from a
// conditional-gradient see-saw over mixtures of at most (dA*dB)^2 product
// states; lower bound from projected gradient descent over the PPT
// superset with a Lagrangian dual certificate.
class SeparabilityOracle final : public FreeSetOracle {
 public:
  SeparabilityOracle(Index dim_a, Index dim_b, SeparabilityOptions opts = {});

  const std::string& name() const override { return name_; }
  Index dim() const override { return dim_a_ * dim_b_; }
  Index dim_a() const { return dim_a_; }
  Index dim_b() const { return dim_b_; }
  ResourceBracket closest_free(const DensityMatrix& rho) const override;
  double diameter_kappa() const override;
  DensityMatrix full_rank_witness() const override;
  // Exact for dA*dB <= 6 (PPT is then equivalent to separability); for
  // larger spaces PPT is checked, which is a necessary condition only.
  bool is_free(const DensityMatrix& sigma, double tol) const override;

 private:
  Index dim_a_, dim_b_;
  SeparabilityOptions opts_;
  std::string name_ = "separability";
};

// Finite map from classical keys to bipartite states on a fixed cut.
struct KeyedEnsemble {
  int key_len = 0;  // key length in bits
  std::vector<std::uint32_t> keys;
  std::vector<DensityMatrix> states;  // parallel to keys
  Index dim_a = 1, dim_b = 1;

  KeyedEnsemble(int key_len_bits, std::vector<std::uint32_t> key_list,
                std::vector<DensityMatrix> state_list, Index da, Index db);

  // Dense ensemble over all 2^key_len_bits keys.
  static KeyedEnsemble dense(int key_len_bits, std::vector<DensityMatrix> state_list,
                             Index da, Index db);

  std::size_t size() const { return states.size(); }
  Index dim() const { return dim_a * dim_b; }
};

struct PseudoresourcePair {
  KeyedEnsemble left;
  KeyedEnsemble right;
  std::shared_ptr<const FreeSetOracle> oracle;
  double claimed_eta = 0.0;

  PseudoresourcePair(KeyedEnsemble l, KeyedEnsemble r,
                     std::shared_ptr<const FreeSetOracle> o, double eta);
};

// Bracket via the oracle, with the returned free state verified as a member
// of F and the bracket checked for soundness (lower <= upper, upper <= kappa).
ResourceBracket relative_entropy_of_resource(const DensityMatrix& rho,
                                             const FreeSetOracle& oracle);

enum class GapStatus { certified, indeterminate, violated };

struct GapResult {
  double min_gap_lower = 0.0;  // certified lower bound on min pairwise gap
  double min_gap_upper = 0.0;  // largest gap any pair could still have
  GapStatus status = GapStatus::indeterminate;
  BoundReport report;
};

// Certified lower bound on min over key pairs of |R(psi_k) - R(phi_k')|
// from bracket arithmetic; certified iff it reaches claimed_eta.
GapResult verify_resource_gap(const PseudoresourcePair& pair);

GapResult verify_gap_with_oracle(const KeyedEnsemble& left, const KeyedEnsemble& right,
                                 const FreeSetOracle& oracle, double claimed_eta);

}  // namespace qrlab
