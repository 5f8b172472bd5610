#pragma once

// Keyed state-family pairs that are pairwise far in trace distance:
// constructors from resource gaps and entanglement-entropy gaps, exhaustive
// pairwise verification, and the statistical surrogate for hiding.

#include "qrlab/bounds.hpp"
#include "qrlab/resource.hpp"

namespace qrlab {

enum class EpfiProvenance { explicit_pair, from_pseudoresource, from_pure_pe, from_mixed_pe };

struct EpfiPair {
  KeyedEnsemble left;
  KeyedEnsemble right;
  double certified_delta = 0.0;  // lower bound on all pairwise trace distances
  EpfiProvenance provenance = EpfiProvenance::explicit_pair;

  EpfiPair(KeyedEnsemble l, KeyedEnsemble r, double delta,
           EpfiProvenance prov = EpfiProvenance::explicit_pair);
};

// Pure bipartite families with a claimed entanglement-entropy gap.
struct PurePePair {
  KeyedEnsemble left;
  KeyedEnsemble right;
  double claimed_eta = 0.0;

  PurePePair(KeyedEnsemble l, KeyedEnsemble r, double eta);
};

enum class ErProxy { single_copy, two_copy };

// Mixed bipartite families with a claimed gap in the (proxied) relative
// entropy of entanglement.
struct MixedPePair {
  KeyedEnsemble left;
  KeyedEnsemble right;
  double claimed_eta = 0.0;
  ErProxy er_proxy = ErProxy::single_copy;

  MixedPePair(KeyedEnsemble l, KeyedEnsemble r, double eta,
              ErProxy proxy = ErProxy::single_copy);
};

// Resource gap eta >= 2 + margin turns into pairwise distance
// (eta - 2) / kappa. Throws unless verify_resource_gap certifies the gap.
EpfiPair from_pseudoresource(const PseudoresourcePair& pair);

// Entanglement-entropy gap eta >= 1/(2e) + margin on pure families turns the
// reduced ensembles into an EpfiPair with delta = (eta - 1/(2e)) / (2 log2 dA).
EpfiPair from_pure_pseudoentanglement(const PurePePair& pair);

// Gap eta >= 2 + margin certified by free-set brackets; delta = (eta - 2) /
// log2(dA*dB). The oracle defaults to separability on the pair's cut.
EpfiPair from_mixed_pseudoentanglement(const MixedPePair& pair);
EpfiPair from_mixed_pseudoentanglement(const MixedPePair& pair,
                                       const FreeSetOracle& oracle);

struct PairwiseFarResult {
  double min_delta = 0.0;
  BoundReport report;
};

// Exact minimum trace distance over all cross pairs; satisfied iff it is at
// least certified_delta - 1e-9.
PairwiseFarResult verify_pairwise_far(const EpfiPair& pair);

// Trace distance between the key-uniform mixtures of m-fold tensor powers:
// the unbounded-adversary distinguishing advantage. Desk-scale statistical
// surrogate for computational indistinguishability.
double statistical_hiding_advantage(const EpfiPair& pair, int m);

// Entanglement entropy across the ensemble's cut (pure states).
double entanglement_entropy(const DensityMatrix& state, Index dim_a, Index dim_b);

}  // namespace qrlab
