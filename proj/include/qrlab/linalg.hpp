#pragma once

// Dense complex linear algebra for small Hilbert spaces (dim <= 64):
// state types, distance and overlap measures, entropies, and optimal
// two-state discrimination.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace qrlab {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Validation tolerance shared by every state-type invariant.
inline constexpr double kValidityTol = 1e-10;
// Eigenvalues in [-kValidityTol, 0] are clamped to 0 by matrix functions.
inline constexpr double kEigClampTol = 1e-10;
// Support threshold for relative-entropy infinity detection.
inline constexpr double kSupportTol = 1e-10;

struct EigSystem {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // columns
};

// Single spectral primitive: Hermitian eigendecomposition of (m + m†)/2.
EigSystem eig_hermitian(const ComplexMatrix& m);

// Spectral square root with eigenvalue clamping at 0 for values in
// [-kEigClampTol, 0]. Throws std::domain_error on indefinite input.
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m);

double max_abs_entry(const ComplexMatrix& m);

// d x d complex positive semidefinite unit-trace matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix mat);

  // For matrices that are positive semidefinite by construction (tensor
  // products, convex mixtures, spectral reassembly of valid states). Skips
  // the eigenvalue check; Hermiticity and trace are still enforced.
  static DensityMatrix trusted(ComplexMatrix mat);

  static DensityMatrix maximally_mixed(Index dim);

  Index dim() const { return mat_.rows(); }
  const ComplexMatrix& mat() const { return mat_; }

  double purity() const;  // Tr rho^2

 private:
  struct SkipEigCheck {};
  DensityMatrix(ComplexMatrix mat, SkipEigCheck);

  ComplexMatrix mat_;
};

// Unit-norm complex amplitude vector.
class PureState {
 public:
  explicit PureState(ComplexVector amps);

  static PureState basis_state(Index dim, Index which);

  Index dim() const { return amps_.rows(); }
  const ComplexVector& amps() const { return amps_; }

  DensityMatrix projector() const;

 private:
  ComplexVector amps_;
};

enum class Side { A, B };

// Density matrix on a fixed A:B cut; index convention is A-major
// (global index = a * dim_b + b).
class BipartiteState {
 public:
  BipartiteState(DensityMatrix state, Index dim_a, Index dim_b);
  static BipartiteState from_pure(const PureState& psi, Index dim_a, Index dim_b);

  Index dim_a() const { return dim_a_; }
  Index dim_b() const { return dim_b_; }
  const DensityMatrix& state() const { return state_; }

 private:
  DensityMatrix state_;
  Index dim_a_;
  Index dim_b_;
};

// Two-outcome POVM: E0, E1 >= 0 with E0 + E1 = I.
class PovmPair {
 public:
  PovmPair(ComplexMatrix e0, ComplexMatrix e1);

  const ComplexMatrix& e0() const { return e0_; }
  const ComplexMatrix& e1() const { return e1_; }

 private:
  ComplexMatrix e0_, e1_;
};

// Kronecker product, A-major index convention (dims multiply).
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b);
ComplexMatrix tensor_power(const ComplexMatrix& m, int n);
ComplexVector tensor_power(const ComplexVector& v, int n);

// Reduced state on the kept side.
DensityMatrix partial_trace(const BipartiteState& rho, Side keep);

// Partial trace over any subset of tensor factors. `dims` are the factor
// dimensions in A-major order; kept factors retain their relative order.
ComplexMatrix partial_trace_multi(const ComplexMatrix& rho,
                                  const std::vector<Index>& dims,
                                  const std::vector<bool>& keep);

// Partial transpose of the B factor on an A:B cut.
ComplexMatrix partial_transpose_b(const ComplexMatrix& m, Index dim_a, Index dim_b);

// Half the trace norm of rho - sigma; value in [0, 1].
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// Squared-trace-norm fidelity [Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// Fidelity against a pure target reduces to a quadratic form.
double fidelity_with_pure(const DensityMatrix& rho, const ComplexVector& target);

// -Tr(rho log2 rho) in bits, with 0 log 0 := 0.
double von_neumann_entropy(const DensityMatrix& rho);

double shannon_entropy_bits(const RealVector& probs);

// Tr[rho (log2 rho - log2 sigma)] in bits; +inf iff supp(rho) is not
// contained in supp(sigma) at the kSupportTol threshold.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

struct HelstromResult {
  PovmPair povm;
  double success_prob;
};

// Optimal discrimination of equal priors: E0 projects onto the nonnegative
// eigenspace of rho - sigma; success probability (1 + trace distance)/2.
HelstromResult helstrom_measurement(const DensityMatrix& rho, const DensityMatrix& sigma);

// Success probability of an arbitrary two-outcome POVM on equal priors.
double povm_success_prob(const PovmPair& povm, const DensityMatrix& rho,
                         const DensityMatrix& sigma);

}  // namespace qrlab
