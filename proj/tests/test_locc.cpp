#include "qrlab/locc.hpp"

#include "qrlab/commitment.hpp"
#include "qrlab/random.hpp"

#include <doctest.h>

#include <cmath>

using namespace qrlab;

namespace {

BipartiteState bell_state() {
  return BipartiteState(PureState(bell_vector()).projector(), 2, 2);
}

}  // namespace

TEST_SUITE_BEGIN("locc");

TEST_CASE("empty circuit pads the input with ancillas") {
  LoccCircuit empty(1, 1, 1, 0, 1, {{}}, {{}});
  Rng rng(2);
  DensityMatrix in = random_density_matrix(rng, 4);
  BipartiteState out = apply_locc(empty, BipartiteState(in, 2, 2));
  CHECK(out.dim_a() == 4);
  CHECK(out.dim_b() == 2);
  // Tracing the ancilla recovers the input.
  ComplexMatrix back =
      partial_trace_multi(out.state().mat(), {2, 2, 2}, {true, false, true});
  CHECK(max_abs_entry(back - in.mat()) < 1e-12);
}

TEST_CASE("local unitary acts as U x I") {
  LoccCircuit ha(1, 0, 1, 0, 0, {{Gate{GateKind::H, {}, {0}}}}, {{}});
  BipartiteState out = apply_locc(ha, bell_state());
  ComplexMatrix h(2, 2);
  double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  ComplexMatrix u = tensor_product(h, ComplexMatrix::Identity(2, 2));
  ComplexMatrix expect = u * bell_state().state().mat() * u.adjoint();
  CHECK(max_abs_entry(out.state().mat() - expect) < 1e-12);
}

TEST_CASE("measure-and-correct round on a bell pair") {
  // A copies its qubit onto C (measurement), B flips conditioned on C.
  LoccCircuit circuit(1, 0, 1, 0, 1,
                      {{Gate{GateKind::CNOT, {0}, {2}}}},
                      {{Gate{GateKind::CNOT, {2}, {1}}}});
  BipartiteState out = apply_locc(circuit, bell_state());

  // Oracle: two explicit classical branches.
  // Outcome 0: state |00>; outcome 1: state |11> then B flips -> |10>.
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  expect(0, 0) = 0.5;
  expect(2, 2) = 0.5;
  CHECK(max_abs_entry(out.state().mat() - expect) < 1e-12);

  BipartiteState branched = apply_locc_branched(circuit, bell_state());
  CHECK(max_abs_entry(branched.state().mat() - out.state().mat()) < 1e-12);
}

TEST_CASE("register locality is enforced") {
  // A-side gate touching B's qubit.
  CHECK_THROWS_AS(LoccCircuit(1, 0, 1, 0, 1, {{Gate{GateKind::X, {}, {1}}}}, {{}}),
                  std::invalid_argument);
  // Repeated operand.
  CHECK_THROWS_AS(LoccCircuit(1, 0, 1, 0, 1, {{Gate{GateKind::CNOT, {0}, {0}}}}, {{}}),
                  std::invalid_argument);
  // Budget.
  std::vector<Gate> many(9, Gate{GateKind::X, {}, {0}});
  CHECK_THROWS_AS(LoccCircuit(1, 0, 1, 0, 0, {many}, {{}}, 8), std::invalid_argument);
}

TEST_CASE("branch sum equals dephasing on random circuits") {
  Rng rng(17);
  for (int i = 0; i < 5; ++i) {
    LoccCircuit circuit = random_locc_circuit(rng, 1, 1, 1, 1, 1, 2, 3);
    DensityMatrix in = random_density_matrix(rng, 4);
    BipartiteState a = apply_locc(circuit, BipartiteState(in, 2, 2));
    BipartiteState b = apply_locc_branched(circuit, BipartiteState(in, 2, 2));
    CHECK(max_abs_entry(a.state().mat() - b.state().mat()) < 1e-9);
  }
}

TEST_CASE("distillation certificate: identity on a bell pair") {
  LoccCircuit identity(1, 0, 1, 0, 0, {{}}, {{}});
  KeyedEnsemble family(0, {0}, {PureState(bell_vector()).projector()}, 2, 2);
  DistillationCertificate cert{family, std::nullopt, identity, 1, 0.0, {}, {}};
  CertificateOutcome out = distillation_deficit(cert);
  CHECK(out.max_deficit <= 1e-12);
  CHECK(out.valid);
  CHECK(cert.per_key_deficit.size() == 1);
}

TEST_CASE("separable inputs cannot reach bell fidelity above one half") {
  Rng rng(23);
  KeyedEnsemble products(
      1, {0, 1},
      {PureState(tensor_product(random_pure_vector(rng, 2), random_pure_vector(rng, 2)))
           .projector(),
       PureState(tensor_product(random_pure_vector(rng, 2), random_pure_vector(rng, 2)))
           .projector()},
      2, 2);
  for (int i = 0; i < 10; ++i) {
    LoccCircuit circuit = random_locc_circuit(rng, 1, 0, 1, 0, 1, 1, 3);
    DistillationCertificate cert{products, std::nullopt, circuit, 1, 0.0, {}, {}};
    CertificateOutcome out = distillation_deficit(cert);
    CHECK(out.max_deficit >= 0.5 - 1e-9);
  }
}

TEST_CASE("cost certificates") {
  // Bell target through the identity at one Bell pair of input.
  LoccCircuit identity(1, 0, 1, 0, 0, {{}}, {{}});
  KeyedEnsemble bell_family(0, {0}, {PureState(bell_vector()).projector()}, 2, 2);
  CertificateOutcome c1 = cost_deficit(bell_family, KeyedLoccMap(identity, 0), 1, 0.0);
  CHECK(c1.max_deficit <= 1e-12);
  CHECK(c1.valid);

  // Product |00> prepared with zero Bell pairs.
  KeyedEnsemble prod_family(
      0, {0}, {PureState::basis_state(4, 0).projector()}, 2, 2);
  CertificateOutcome c2 = cost_deficit(prod_family, KeyedLoccMap(identity, 0), 0, 0.0);
  CHECK(c2.max_deficit <= 1e-12);

  // Pauli-keyed Bell family from one Bell pair plus keyed corrections.
  LoccCircuit proto(1, 2, 1, 2, 0, {{}}, {{}});
  std::vector<Gate> a_gates{Gate{GateKind::CNOT, {proto.ap_qubit(0)}, {proto.a_qubit(0)}},
                            Gate{GateKind::CZ, {proto.ap_qubit(1)}, {proto.a_qubit(0)}}};
  LoccCircuit keyed(1, 2, 1, 2, 0, {a_gates}, {{}});

  std::vector<DensityMatrix> pauli_states;
  std::vector<Index> qdims{2, 2};
  for (int key = 0; key < 4; ++key) {
    ComplexVector v = bell_vector();
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
    pauli_states.push_back(PureState(apply_on_factor(v, qdims, 0, u)).projector());
  }
  KeyedEnsemble pauli_family(2, {0, 1, 2, 3}, pauli_states, 2, 2);
  std::vector<double> per_key;
  CertificateOutcome c3 =
      cost_deficit(pauli_family, KeyedLoccMap(keyed, 2), 1, 0.0, &per_key);
  CHECK(per_key.size() == 4);
  CHECK(c3.max_deficit <= 1e-12);
}

TEST_CASE("choi matrix of a random locc map is positive") {
  Rng rng(29);
  for (int i = 0; i < 3; ++i) {
    LoccCircuit circuit = random_locc_circuit(rng, 1, 1, 1, 0, 1, 1, 3);
    ComplexMatrix choi = locc_choi_matrix(circuit);
    EigSystem es = eig_hermitian(choi);
    CHECK(es.values.minCoeff() >= -1e-9);
    CHECK(choi.trace().real() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("locked entanglement demo, one pair") {
  LockedDemoReport rep = locked_entanglement_demo(1);
  CHECK(rep.num_keys == 4);
  CHECK(rep.with_key_max_deficit <= 1e-12);
  CHECK(rep.key_avg_max_dev <= 1e-12);
  CHECK(rep.key_avg_ppt_min_eig >= -1e-12);
  CHECK(rep.hiding_advantage <= 1e-12);
  CHECK(rep.reference_cost_deficit <= 1e-12);
  CHECK(rep.nokey_best_fidelity <= 0.5 + 1e-9);
  CHECK(rep.nokey_circuits > 1000000);
  CHECK_THROWS_AS(locked_entanglement_demo(3), std::invalid_argument);
}

TEST_SUITE_END();
