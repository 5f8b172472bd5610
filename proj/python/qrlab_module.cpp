// Python bindings over the main operations: states, distances, entropies,
// continuity bounds, free-set oracles, keyed-family constructions, the
// commitment attack, and the locked-entanglement demo.

#include "qrlab/bounds.hpp"
#include "qrlab/commitment.hpp"
#include "qrlab/epfi.hpp"
#include "qrlab/locc.hpp"
#include "qrlab/resource.hpp"
#include "qrlab/suite.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <vector>

namespace py = pybind11;
using namespace qrlab;

namespace {

using PyMatrix = std::vector<std::vector<std::complex<double>>>;

ComplexMatrix to_matrix(const PyMatrix& rows) {
  if (rows.empty()) throw std::invalid_argument("empty matrix");
  Index r = static_cast<Index>(rows.size());
  Index c = static_cast<Index>(rows[0].size());
  ComplexMatrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    if (static_cast<Index>(rows[i].size()) != c)
      throw std::invalid_argument("ragged matrix");
    for (Index j = 0; j < c; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

PyMatrix from_matrix(const ComplexMatrix& m) {
  PyMatrix rows(static_cast<std::size_t>(m.rows()));
  for (Index i = 0; i < m.rows(); ++i) {
    rows[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(m.cols()));
    for (Index j = 0; j < m.cols(); ++j)
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  }
  return rows;
}

DensityMatrix to_density(const PyMatrix& rows) { return DensityMatrix(to_matrix(rows)); }

}  // namespace

PYBIND11_MODULE(_qrlab, m) {
  m.doc() = "desk-scale laboratory for entanglement measures, pairwise-far state "
            "families, and canonical commitments";

  m.def("trace_distance", [](const PyMatrix& a, const PyMatrix& b) {
    return trace_distance(to_density(a), to_density(b));
  });
  m.def("fidelity", [](const PyMatrix& a, const PyMatrix& b) {
    return fidelity(to_density(a), to_density(b));
  });
  m.def("von_neumann_entropy",
        [](const PyMatrix& a) { return von_neumann_entropy(to_density(a)); });
  m.def("relative_entropy", [](const PyMatrix& a, const PyMatrix& b) {
    return relative_entropy(to_density(a), to_density(b));
  });
  m.def("partial_trace",
        [](const PyMatrix& rho, Index dim_a, Index dim_b, const std::string& keep) {
          Side side = keep == "A" ? Side::A : Side::B;
          return from_matrix(
              partial_trace(BipartiteState(to_density(rho), dim_a, dim_b), side).mat());
        },
        py::arg("rho"), py::arg("dim_a"), py::arg("dim_b"), py::arg("keep") = "A");
  m.def("tensor_product", [](const PyMatrix& a, const PyMatrix& b) {
    return from_matrix(tensor_product(to_matrix(a), to_matrix(b)));
  });
  m.def("helstrom", [](const PyMatrix& a, const PyMatrix& b) {
    HelstromResult h = helstrom_measurement(to_density(a), to_density(b));
    return py::make_tuple(from_matrix(h.povm.e0()), from_matrix(h.povm.e1()),
                          h.success_prob);
  });

  m.def("binary_entropy", &binary_entropy);
  m.def("fannes_bound", &fannes_bound);
  m.def("winter_resource_bound", &winter_resource_bound);
  m.def("winter_entanglement_bound", &winter_entanglement_bound);
  m.def("copies_amplification", &copies_amplification);
  m.def("binding_fidelity_bound", &binding_fidelity_bound);

  m.def("coherence_bracket", [](const PyMatrix& rho) {
    DensityMatrix d = to_density(rho);
    CoherenceOracle oracle(d.dim());
    ResourceBracket b = oracle.closest_free(d);
    return py::make_tuple(b.lower, b.upper, b.converged);
  });
  m.def("separability_bracket", [](const PyMatrix& rho, Index dim_a, Index dim_b) {
    SeparabilityOracle oracle(dim_a, dim_b);
    ResourceBracket b = oracle.closest_free(to_density(rho));
    return py::make_tuple(b.lower, b.upper, b.converged);
  });

  m.def("pairwise_min_distance",
        [](const std::vector<PyMatrix>& left, const std::vector<PyMatrix>& right,
           Index dim_a, Index dim_b) {
          auto build = [&](const std::vector<PyMatrix>& states) {
            std::vector<DensityMatrix> out;
            std::vector<std::uint32_t> keys;
            for (std::size_t i = 0; i < states.size(); ++i) {
              out.push_back(to_density(states[i]));
              keys.push_back(static_cast<std::uint32_t>(i));
            }
            return KeyedEnsemble(20, std::move(keys), std::move(out), dim_a, dim_b);
          };
          EpfiPair pair(build(left), build(right), 0.0);
          return verify_pairwise_far(pair).min_delta;
        });

  m.def("commitment_attack_demo", [](double delta, int copies) {
    ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
    zero(0, 0) = 1.0;
    ComplexMatrix mixed = ComplexMatrix::Zero(2, 2);
    mixed(0, 0) = 1.0 - delta;
    mixed(1, 1) = delta;
    KeyedEnsemble left(0, {0}, {DensityMatrix(zero)}, 2, 1);
    KeyedEnsemble right(0, {0}, {DensityMatrix(mixed)}, 2, 1);
    CommitCircuitFamily scheme = build_from_epfi(EpfiPair(left, right, delta), copies);
    AttackResult attack = optimal_opening_attack(scheme, 0, 0, copies);
    double ceiling = binding_fidelity_bound(copies_amplification(delta, copies));
    return py::make_tuple(attack.success_prob, attack.achieved_overlap, ceiling);
  });

  m.def("locked_demo", [](int n_pairs) {
    LockedDemoReport rep = locked_entanglement_demo(n_pairs);
    py::dict d;
    d["n_pairs"] = rep.n_pairs;
    d["num_keys"] = rep.num_keys;
    d["with_key_max_deficit"] = rep.with_key_max_deficit;
    d["key_avg_max_dev"] = rep.key_avg_max_dev;
    d["key_avg_ppt_min_eig"] = rep.key_avg_ppt_min_eig;
    d["hiding_advantage"] = rep.hiding_advantage;
    d["reference_cost_deficit"] = rep.reference_cost_deficit;
    d["nokey_best_fidelity"] = rep.nokey_best_fidelity;
    d["nokey_bound"] = rep.nokey_bound;
    d["nokey_circuits"] = rep.nokey_circuits;
    d["scope_note"] = rep.scope_note;
    return d;
  });

  m.def("run_suite",
        [](const std::vector<std::string>& suites, std::uint64_t seed) {
          SuiteConfig config;
          config.seed = seed;
          config.suites = suites;
          Report rep = run_suite(config);
          py::dict d;
          d["pass"] = rep.passed();
          d["fail"] = rep.failed();
          d["indeterminate"] = rep.indeterminate();
          d["all_passed"] = rep.all_passed();
          d["json"] = rep.to_json();
          return d;
        },
        py::arg("suites"), py::arg("seed") = 42);
}
