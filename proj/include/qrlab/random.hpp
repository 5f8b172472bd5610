#pragma once

// Deterministic random state generation. Distributions are hand-rolled on
// top of mt19937_64 raw draws so runs reproduce bit-for-bit across standard
// library implementations.

#include "qrlab/linalg.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace qrlab {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream derived from a seed and a label (e.g. a check name).
  static Rng stream(std::uint64_t seed, std::string_view label);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);
  // Standard normal via Box-Muller.
  double normal();

  std::complex<double> normal_complex();

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

ComplexVector random_pure_vector(Rng& rng, Index dim);
PureState random_pure_state(Rng& rng, Index dim);

// Haar-distributed via QR of a Ginibre matrix with phase fixing.
ComplexMatrix random_unitary(Rng& rng, Index dim);

// Full-rank by default (rank = dim); lower rank on request.
DensityMatrix random_density_matrix(Rng& rng, Index dim, Index rank = 0);

// Random two-outcome POVM: E0 = U diag(u) U^dag with u_i uniform in [0,1].
PovmPair random_povm_pair(Rng& rng, Index dim);

}  // namespace qrlab
