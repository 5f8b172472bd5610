#include "qrlab/epfi.hpp"

#include "qrlab/commitment.hpp"
#include "qrlab/random.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

using namespace qrlab;

namespace {

constexpr double kHalfInvE = 0.5 / std::numbers::e;

ComplexVector bell4() {
  ComplexVector v = ComplexVector::Zero(4);
  v[0] = v[3] = 1.0 / std::sqrt(2.0);
  return v;
}

DensityMatrix maximally_coherent(Index d) {
  return PureState(ComplexVector::Constant(d, 1.0 / std::sqrt(double(d)))).projector();
}

DensityMatrix basis_proj(Index d, Index i) { return PureState::basis_state(d, i).projector(); }

KeyedEnsemble single(const DensityMatrix& s, Index da, Index db) {
  return KeyedEnsemble(0, {0}, {s}, da, db);
}

// Oracle with pinned brackets, for exercising certification arithmetic.
struct StubOracle final : FreeSetOracle {
  Index d;
  double lo_a, up_a, lo_b, up_b;  // first call batch vs rest keyed by trace
  mutable int calls = 0;
  StubOracle(Index dim, double la, double ua, double lb, double ub)
      : d(dim), lo_a(la), up_a(ua), lo_b(lb), up_b(ub) {}
  const std::string& name() const override {
    static std::string n = "stub";
    return n;
  }
  Index dim() const override { return d; }
  ResourceBracket closest_free(const DensityMatrix& rho) const override {
    ResourceBracket b;
    // Pure states get the (lo_b, up_b) bracket, mixed states (lo_a, up_a).
    if (rho.purity() > 1.0 - 1e-9) {
      b.lower = lo_b;
      b.upper = up_b;
    } else {
      b.lower = lo_a;
      b.upper = up_a;
    }
    ++calls;
    return b;
  }
  double diameter_kappa() const override { return 8.0; }
  DensityMatrix full_rank_witness() const override {
    return DensityMatrix::maximally_mixed(d);
  }
  bool is_free(const DensityMatrix&, double) const override { return true; }
};

}  // namespace

TEST_SUITE_BEGIN("epfi");

TEST_CASE("from_pseudoresource boundary and formula") {
  auto oracle = std::make_shared<CoherenceOracle>(16);
  KeyedEnsemble left(0, {0}, {basis_proj(16, 0)}, 16, 1);
  KeyedEnsemble right(0, {0}, {maximally_coherent(16)}, 16, 1);

  // eta = 2 exactly violates the hypothesis.
  CHECK_THROWS_AS(from_pseudoresource(PseudoresourcePair(left, right, oracle, 2.0)),
                  std::invalid_argument);

  EpfiPair pair = from_pseudoresource(PseudoresourcePair(left, right, oracle, 4.0));
  CHECK(pair.certified_delta == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pair.provenance == EpfiProvenance::from_pseudoresource);
  PairwiseFarResult far = verify_pairwise_far(pair);
  CHECK(far.min_delta >= 0.5 - 1e-9);
  CHECK(far.report.satisfied);
}

TEST_CASE("from_pseudoresource with kappa 8 stub oracle") {
  // Claimed eta = 3 against brackets (0,0) and (3,3): delta = 1/8.
  auto oracle = std::make_shared<StubOracle>(16, 0.0, 0.0, 3.0, 3.0);
  KeyedEnsemble left(1, {0, 1},
                     {DensityMatrix::maximally_mixed(16), DensityMatrix::maximally_mixed(16)},
                     16, 1);
  KeyedEnsemble right(1, {0, 1}, {maximally_coherent(16), maximally_coherent(16)}, 16, 1);
  EpfiPair pair = from_pseudoresource(PseudoresourcePair(left, right, oracle, 3.0));
  CHECK(pair.certified_delta == doctest::Approx(0.125).epsilon(1e-12));
  // Exhaustive sweep confirms the bound on the actual states.
  PairwiseFarResult far = verify_pairwise_far(pair);
  CHECK(far.min_delta >= 0.125);
}

TEST_CASE("from_pure_pseudoentanglement instance") {
  // Left: 2+2 qubit products (entropy 0); right: two Bell pairs (entropy 2),
  // arranged on the (a1 a2 : b1 b2) cut.
  Rng rng(5);
  ComplexVector prod =
      tensor_product(random_pure_vector(rng, 4), random_pure_vector(rng, 4));
  ComplexVector arranged = ComplexVector::Zero(16);
  for (Index x = 0; x < 4; ++x) arranged[x * 4 + x] = 0.5;

  KeyedEnsemble left(0, {0}, {PureState(prod).projector()}, 4, 4);
  KeyedEnsemble right(0, {0}, {PureState(arranged).projector()}, 4, 4);
  EpfiPair pair = from_pure_pseudoentanglement(PurePePair(left, right, 2.0));

  double expect = (2.0 - kHalfInvE) / 4.0;
  CHECK(pair.certified_delta == doctest::Approx(expect).epsilon(1e-12));
  CHECK(expect == doctest::Approx(0.45402).epsilon(1e-5));

  // Reduced states: random pure on A vs I4/4; distance is exactly 3/4.
  PairwiseFarResult far = verify_pairwise_far(pair);
  CHECK(far.min_delta == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(far.min_delta >= expect);

  // Entropy identity on the left reduced states.
  CHECK(von_neumann_entropy(pair.right.states[0]) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("from_pure_pseudoentanglement error paths") {
  ComplexVector arranged = ComplexVector::Zero(16);
  for (Index x = 0; x < 4; ++x) arranged[x * 4 + x] = 0.5;
  KeyedEnsemble bells(0, {0}, {PureState(arranged).projector()}, 4, 4);

  // Identical families: zero gap detected at verification.
  CHECK_THROWS_AS(from_pure_pseudoentanglement(PurePePair(bells, bells, 1.0)),
                  std::runtime_error);
  // eta at the 1/(2e) boundary violates the hypothesis.
  CHECK_THROWS_AS(from_pure_pseudoentanglement(PurePePair(bells, bells, kHalfInvE)),
                  std::invalid_argument);
  // Non-pure ensembles are rejected on construction.
  KeyedEnsemble mixed(0, {0}, {DensityMatrix::maximally_mixed(16)}, 4, 4);
  CHECK_THROWS_AS(PurePePair(bells, mixed, 1.0), std::invalid_argument);
}

TEST_CASE("from_mixed_pseudoentanglement paths") {
  // eta <= 2 is rejected outright.
  KeyedEnsemble any = single(DensityMatrix::maximally_mixed(4), 2, 2);
  CHECK_THROWS_AS(from_mixed_pseudoentanglement(MixedPePair(any, any, 2.0)),
                  std::invalid_argument);
  // Identical families: certified violation of any positive gap.
  CHECK_THROWS_AS(from_mixed_pseudoentanglement(MixedPePair(any, any, 2.5)),
                  std::runtime_error);

  // Success path with an injected oracle: the real separability oracle cannot
  // certify gaps above 2 at these dimensions (its diameter caps the value),
  // so pin brackets (0.2) vs (3.0) and check the distance formula.
  StubOracle oracle(16, 0.2, 0.2, 3.0, 3.0);
  KeyedEnsemble left = single(DensityMatrix::maximally_mixed(16), 4, 4);
  ComplexVector arranged = ComplexVector::Zero(16);
  for (Index x = 0; x < 4; ++x) arranged[x * 4 + x] = 0.5;
  KeyedEnsemble right = single(PureState(arranged).projector(), 4, 4);
  EpfiPair pair =
      from_mixed_pseudoentanglement(MixedPePair(left, right, 2.5), oracle);
  CHECK(pair.certified_delta == doctest::Approx(0.5 / 4.0).epsilon(1e-12));
  PairwiseFarResult far = verify_pairwise_far(pair);
  CHECK(far.min_delta >= pair.certified_delta);
}

TEST_CASE("verify_pairwise_far extremes") {
  KeyedEnsemble zero = single(basis_proj(2, 0), 2, 1);
  KeyedEnsemble one = single(basis_proj(2, 1), 2, 1);
  EpfiPair orth(zero, one, 1.0);
  CHECK(verify_pairwise_far(orth).min_delta == doctest::Approx(1.0).epsilon(1e-12));

  EpfiPair same(zero, zero, 0.0);
  CHECK(verify_pairwise_far(same).min_delta == doctest::Approx(0.0));
}

TEST_CASE("statistical hiding advantage") {
  // Pauli-keyed Bell ensemble against the fixed maximally mixed state: the
  // four-term average equals I/4 exactly, computed here as the oracle.
  std::vector<DensityMatrix> pauli;
  std::vector<Index> qdims{2, 2};
  for (int key = 0; key < 4; ++key) {
    ComplexVector v = bell4();
    ComplexMatrix u = ComplexMatrix::Identity(2, 2);
    if ((key >> 1) & 1) {
      ComplexMatrix x(2, 2);
      x << 0, 1, 1, 0;
      u = x * u;
    }
    if (key & 1) {
      ComplexMatrix z = ComplexMatrix::Identity(2, 2);
      z(1, 1) = -1.0;
      u = z * u;
    }
    pauli.push_back(PureState(apply_on_factor(v, qdims, 0, u)).projector());
  }
  ComplexMatrix avg = ComplexMatrix::Zero(4, 4);
  for (const DensityMatrix& s : pauli) avg += 0.25 * s.mat();
  CHECK(max_abs_entry(avg - 0.25 * ComplexMatrix::Identity(4, 4)) < 1e-12);

  KeyedEnsemble left(2, {0, 1, 2, 3}, pauli, 2, 2);
  KeyedEnsemble right(2, {0, 1, 2, 3},
                      std::vector<DensityMatrix>(4, DensityMatrix::maximally_mixed(4)), 2,
                      2);
  EpfiPair pair(left, right, 0.5);
  CHECK(statistical_hiding_advantage(pair, 1) <= 1e-9);
  CHECK(verify_pairwise_far(pair).min_delta >= 0.5);

  KeyedEnsemble zero = single(basis_proj(2, 0), 2, 1);
  KeyedEnsemble one = single(basis_proj(2, 1), 2, 1);
  CHECK(statistical_hiding_advantage(EpfiPair(zero, one, 1.0), 1) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(statistical_hiding_advantage(EpfiPair(zero, zero, 0.0), 2) ==
        doctest::Approx(0.0));
}

TEST_SUITE_END();
