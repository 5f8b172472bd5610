// Writes example ensemble and circuit files used by the CLI tests.

#include "qrlab/commitment.hpp"
#include "qrlab/io.hpp"
#include "qrlab/locc.hpp"

#include <cstdio>
#include <string>

using namespace qrlab;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: make_fixtures <dir>\n");
    return 2;
  }
  std::string dir = argv[1];

  // Orthogonal single-key qubit ensembles for commit/attack runs.
  KeyedEnsemble zero(0, {0}, {PureState::basis_state(2, 0).projector()}, 2, 1);
  KeyedEnsemble one(0, {0}, {PureState::basis_state(2, 1).projector()}, 2, 1);
  save_ensemble(zero, dir + "/ensemble_zero.json");
  save_ensemble(one, dir + "/ensemble_one.json");

  // Mixed bit-1 ensemble at trace distance 1/2 from |0><0|.
  KeyedEnsemble mixed(0, {0}, {DensityMatrix::maximally_mixed(2)}, 2, 1);
  save_ensemble(mixed, dir + "/ensemble_mixed.json");

  // Bell family plus the identity circuit for distillation checks.
  KeyedEnsemble bell(0, {0}, {PureState(bell_vector()).projector()}, 2, 2);
  save_ensemble(bell, dir + "/ensemble_bell.json");
  LoccCircuit identity(1, 0, 1, 0, 0, {{}}, {{}});
  save_circuit(identity, dir + "/circuit_identity.json");

  // Keyed correction circuit for the Pauli-keyed Bell family.
  LoccCircuit proto(1, 2, 1, 2, 0, {{}}, {{}});
  std::vector<Gate> a_gates{Gate{GateKind::CNOT, {proto.ap_qubit(0)}, {proto.a_qubit(0)}},
                            Gate{GateKind::CZ, {proto.ap_qubit(1)}, {proto.a_qubit(0)}}};
  LoccCircuit keyed(1, 2, 1, 2, 0, {a_gates}, {{}});
  save_circuit(keyed, dir + "/circuit_keyed_correction.json");

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
  KeyedEnsemble pauli(2, {0, 1, 2, 3}, pauli_states, 2, 2);
  save_ensemble(pauli, dir + "/ensemble_pauli_bell.json");

  std::printf("fixtures written to %s\n", dir.c_str());
  return 0;
}
