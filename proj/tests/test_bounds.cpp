#include "qrlab/bounds.hpp"

#include "qrlab/linalg.hpp"
#include "qrlab/random.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace qrlab;

namespace {

double h2(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}
}  // namespace

TEST_SUITE_BEGIN("bounds");

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(binary_entropy(0.11) == doctest::Approx(h2(0.11)).epsilon(1e-12));
  CHECK(h2(0.11) == doctest::Approx(0.49992).epsilon(1e-4));
  CHECK_THROWS_AS(binary_entropy(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(binary_entropy(1.1), std::invalid_argument);
}

TEST_CASE("fannes bound values") {
  CHECK(fannes_bound(0.0, 7) == 0.0);
  double f1 = 2.0 * 0.1 * 1.0 - 0.1 * std::log2(0.1);
  CHECK(fannes_bound(0.1, 2) == doctest::Approx(f1).epsilon(1e-12));
  CHECK(f1 == doctest::Approx(0.53219).epsilon(1e-5));
  CHECK(fannes_bound(0.5, 4) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK_THROWS_AS(fannes_bound(0.5, 1), std::invalid_argument);
}

TEST_CASE("fannes bound dominates the sharp entropy-difference maximum") {
  // The capped textbook variant fails at, e.g., diag(1,0) vs diag(.65,.35);
  // the uncapped form must clear the sharp maximum x log2(d-1) + h(x).
  for (int d : {2, 4, 8, 16}) {
    for (int i = 1; i < 100; ++i) {
      double x = i / 100.0;
      double sharp = x * std::log2(double(d - 1)) + h2(x);
      CHECK(fannes_bound(x, d) >= sharp - 1e-12);
    }
  }
}

TEST_CASE("winter resource bound values") {
  CHECK(winter_resource_bound(0.0, 10.0) == 0.0);
  CHECK(winter_resource_bound(1.0, 3.0) == doctest::Approx(5.0).epsilon(1e-12));
  double w = 0.5 * 2.0 + 1.5 * h2(1.0 / 3.0);
  CHECK(winter_resource_bound(0.5, 2.0) == doctest::Approx(w).epsilon(1e-12));
  CHECK(w == doctest::Approx(2.37744).epsilon(1e-5));
}

TEST_CASE("winter entanglement bound values") {
  CHECK(winter_entanglement_bound(0.0, 16) == 0.0);
  CHECK(winter_entanglement_bound(1.0, 4) == doctest::Approx(4.0).epsilon(1e-12));
  double w = 0.25 * 4.0 + 1.25 * h2(0.2);
  CHECK(winter_entanglement_bound(0.25, 16) == doctest::Approx(w).epsilon(1e-12));
  CHECK(w == doctest::Approx(1.9024101).epsilon(1e-6));
}

TEST_CASE("copies amplification values") {
  CHECK(copies_amplification(0.7, 0) == 0.0);
  CHECK(copies_amplification(0.0, 9) == 0.0);
  CHECK(copies_amplification(0.3, 20) ==
        doctest::Approx(1.0 - std::exp(-0.9)).epsilon(1e-12));
  CHECK(1.0 - std::exp(-0.9) == doctest::Approx(0.59343).epsilon(1e-5));
  CHECK(copies_amplification(1.0, 2) == doctest::Approx(1.0 - std::exp(-1.0)));
}

TEST_CASE("binding fidelity bound values") {
  CHECK(binding_fidelity_bound(1.0) == 0.0);
  CHECK(binding_fidelity_bound(0.0) == 1.0);
  CHECK(binding_fidelity_bound(0.6) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("bound report semantics") {
  BoundReport ok = make_bound_report("x", 1.0, 1.0);
  CHECK(ok.satisfied);
  CHECK(ok.slack == 0.0);
  BoundReport edge = make_bound_report("x", 1.0 + 5e-10, 1.0);
  CHECK(edge.satisfied);  // within the 1e-9 slack
  BoundReport bad = make_bound_report("x", 1.0 + 1e-6, 1.0);
  CHECK(!bad.satisfied);
}

TEST_CASE("amplification floor holds for explicit powers up to dim 64") {
  // Qubit pairs, n = 6 tensor powers: the largest explicit power in scope.
  Rng rng(41);
  for (int i = 0; i < 10; ++i) {
    DensityMatrix rho = random_density_matrix(rng, 2);
    DensityMatrix sigma = random_density_matrix(rng, 2);
    double delta = trace_distance(rho, sigma);
    for (int n : {1, 3, 6}) {
      DensityMatrix rho_n = DensityMatrix::trusted(tensor_power(rho.mat(), n));
      DensityMatrix sigma_n = DensityMatrix::trusted(tensor_power(sigma.mat(), n));
      CHECK(trace_distance(rho_n, sigma_n) >= copies_amplification(delta, n) - 1e-9);
    }
  }
}

TEST_CASE("monotone in the distance argument") {
  double prev_f = fannes_bound(0.0, 16);
  double prev_w = winter_resource_bound(0.0, 4.0);
  double prev_a = copies_amplification(0.0, 3);
  double prev_b = binding_fidelity_bound(0.0);
  for (int i = 1; i <= 1000; ++i) {
    double x = i / 1000.0;
    CHECK(fannes_bound(x, 16) >= prev_f - 1e-12);
    CHECK(winter_resource_bound(x, 4.0) >= prev_w - 1e-12);
    CHECK(copies_amplification(x, 3) >= prev_a - 1e-12);
    CHECK(binding_fidelity_bound(x) <= prev_b + 1e-12);
    prev_f = fannes_bound(x, 16);
    prev_w = winter_resource_bound(x, 4.0);
    prev_a = copies_amplification(x, 3);
    prev_b = binding_fidelity_bound(x);
  }
}

TEST_SUITE_END();
