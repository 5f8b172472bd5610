#include "qrlab/resource.hpp"

#include "qrlab/random.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>

using namespace qrlab;

namespace {

DensityMatrix maximally_coherent(Index d) {
  ComplexVector v = ComplexVector::Constant(d, 1.0 / std::sqrt(double(d)));
  return PureState(v).projector();
}

DensityMatrix bell_rho() {
  ComplexVector v = ComplexVector::Zero(4);
  v[0] = v[3] = 1.0 / std::sqrt(2.0);
  return PureState(v).projector();
}

}  // namespace

TEST_SUITE_BEGIN("resource");

TEST_CASE("coherence oracle closed form") {
  CoherenceOracle oracle(4);
  Rng rng(3);

  // Diagonal states are free.
  ComplexMatrix d = ComplexMatrix::Zero(4, 4);
  d(0, 0) = 0.4;
  d(1, 1) = 0.3;
  d(2, 2) = 0.2;
  d(3, 3) = 0.1;
  ResourceBracket free_b = oracle.closest_free(DensityMatrix(d));
  CHECK(free_b.lower == 0.0);
  CHECK(free_b.upper == 0.0);

  ResourceBracket mixed = oracle.closest_free(DensityMatrix::maximally_mixed(4));
  CHECK(mixed.upper == 0.0);

  // Maximally coherent two-qubit state: exactly 2 bits.
  ResourceBracket coh = oracle.closest_free(maximally_coherent(4));
  CHECK(coh.lower == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(coh.upper == doctest::Approx(2.0).epsilon(1e-10));

  // Plus state on one qubit: exactly 1 bit.
  CoherenceOracle q(2);
  ResourceBracket plus = q.closest_free(maximally_coherent(2));
  CHECK(plus.lower == doctest::Approx(1.0).epsilon(1e-10));

  CHECK(oracle.diameter_kappa() == doctest::Approx(2.0));
  CHECK(oracle.is_free(oracle.full_rank_witness(), 1e-12));
}

TEST_CASE("relative_entropy_of_resource verifies the witness") {
  CoherenceOracle oracle(2);
  ResourceBracket b = relative_entropy_of_resource(maximally_coherent(2), oracle);
  CHECK(b.lower == doctest::Approx(1.0).epsilon(1e-10));
  REQUIRE(b.upper_witness.has_value());
  CHECK(oracle.is_free(*b.upper_witness, 1e-10));
}

TEST_CASE("separability oracle on product and entangled states") {
  SeparabilityOracle oracle(2, 2);

  // Explicit product mixture: free, so the bracket collapses at zero.
  ComplexMatrix sep = ComplexMatrix::Zero(4, 4);
  sep(0, 0) = 0.5;
  sep(3, 3) = 0.5;
  ResourceBracket sb = oracle.closest_free(DensityMatrix(sep));
  CHECK(sb.upper <= 1e-6);

  ResourceBracket bell = oracle.closest_free(bell_rho());
  CHECK(bell.lower <= 1.0 + 1e-6);
  CHECK(bell.upper >= 1.0 - 1e-6);
  CHECK(bell.width() <= 0.05);

  ComplexVector skew = ComplexVector::Zero(4);
  skew << std::sqrt(0.9), 0, 0, std::sqrt(0.1);
  ResourceBracket sk = oracle.closest_free(PureState(skew).projector());
  double truth = -(0.9 * std::log2(0.9) + 0.1 * std::log2(0.1));
  CHECK(truth == doctest::Approx(0.46900).epsilon(1e-4));
  CHECK(sk.lower <= truth + 1e-6);
  CHECK(sk.upper >= truth - 1e-6);
  CHECK(sk.width() <= 0.05);

  CHECK(oracle.diameter_kappa() == doctest::Approx(1.0));
  CHECK_THROWS_AS(SeparabilityOracle(8, 4), std::invalid_argument);
}

TEST_CASE("keyed ensemble invariants") {
  std::vector<DensityMatrix> states{DensityMatrix::maximally_mixed(4)};
  CHECK_THROWS_AS(KeyedEnsemble(1, {0, 1}, states, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(KeyedEnsemble(1, {3}, states, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(KeyedEnsemble(1, {0}, states, 2, 4), std::invalid_argument);
  KeyedEnsemble ok(1, {1}, states, 2, 2);
  CHECK(ok.size() == 1);
}

TEST_CASE("resource gap certification outcomes") {
  auto oracle = std::make_shared<CoherenceOracle>(4);
  std::vector<std::uint32_t> keys{0, 1};

  ComplexMatrix d = ComplexMatrix::Zero(4, 4);
  d(0, 0) = 0.7;
  d(3, 3) = 0.3;
  std::vector<DensityMatrix> diag_states{DensityMatrix(d),
                                         DensityMatrix::maximally_mixed(4)};
  KeyedEnsemble diag(1, keys, diag_states, 4, 1);
  std::vector<DensityMatrix> coh_states{maximally_coherent(4), maximally_coherent(4)};
  KeyedEnsemble coh(1, keys, coh_states, 4, 1);

  // Identical ensembles: gap is exactly zero, hence certified violation.
  GapResult same = verify_resource_gap(PseudoresourcePair(diag, diag, oracle, 0.5));
  CHECK(same.min_gap_lower == 0.0);
  CHECK(same.status == GapStatus::violated);

  GapResult gap2 = verify_resource_gap(PseudoresourcePair(diag, coh, oracle, 2.0));
  CHECK(gap2.min_gap_lower == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(gap2.status == GapStatus::certified);

  GapResult too_much = verify_resource_gap(PseudoresourcePair(diag, coh, oracle, 2.5));
  CHECK(too_much.status == GapStatus::violated);
}

TEST_CASE("single-key bell vs product via the separability oracle") {
  auto oracle = std::make_shared<SeparabilityOracle>(2, 2);
  ComplexMatrix prod = ComplexMatrix::Zero(4, 4);
  prod(0, 0) = 1.0;
  KeyedEnsemble left(0, {0}, {DensityMatrix(prod)}, 2, 2);
  KeyedEnsemble right(0, {0}, {bell_rho()}, 2, 2);
  GapResult gap = verify_gap_with_oracle(left, right, *oracle, 0.95);
  CHECK(gap.min_gap_lower >= 0.95);
  CHECK(gap.status == GapStatus::certified);
}

TEST_CASE("indeterminate gap is distinct from failure") {
  // A stub oracle with wide brackets that can neither certify nor refute.
  struct WideOracle final : FreeSetOracle {
    const std::string& name() const override {
      static std::string n = "wide";
      return n;
    }
    Index dim() const override { return 2; }
    ResourceBracket closest_free(const DensityMatrix&) const override {
      ResourceBracket b;
      b.lower = 0.0;
      b.upper = 0.9;
      b.converged = false;
      return b;
    }
    double diameter_kappa() const override { return 1.0; }
    DensityMatrix full_rank_witness() const override {
      return DensityMatrix::maximally_mixed(2);
    }
    bool is_free(const DensityMatrix&, double) const override { return true; }
  };
  WideOracle oracle;
  KeyedEnsemble one(0, {0}, {DensityMatrix::maximally_mixed(2)}, 2, 1);
  GapResult g = verify_gap_with_oracle(one, one, oracle, 0.5);
  CHECK(g.status == GapStatus::indeterminate);
}

TEST_SUITE_END();
