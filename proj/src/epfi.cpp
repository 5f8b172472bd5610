#include "qrlab/epfi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qrlab {

namespace {

constexpr double kHalfInvE = 0.5 / std::numbers::e;

void check_same_space(const KeyedEnsemble& l, const KeyedEnsemble& r) {
  if (l.dim_a != r.dim_a || l.dim_b != r.dim_b)
    throw std::invalid_argument("ensembles live on different spaces");
}

double purity_floor(const KeyedEnsemble& e) {
  double p = 1.0;
  for (const DensityMatrix& s : e.states) p = std::min(p, s.purity());
  return p;
}

}  // namespace

EpfiPair::EpfiPair(KeyedEnsemble l, KeyedEnsemble r, double delta, EpfiProvenance prov)
    : left(std::move(l)), right(std::move(r)), certified_delta(delta), provenance(prov) {
  check_same_space(left, right);
  if (!(certified_delta >= 0.0 && certified_delta <= 1.0))
    throw std::invalid_argument("EpfiPair: certified_delta outside [0, 1]");
}

PurePePair::PurePePair(KeyedEnsemble l, KeyedEnsemble r, double eta)
    : left(std::move(l)), right(std::move(r)), claimed_eta(eta) {
  check_same_space(left, right);
  if (purity_floor(left) < 1.0 - 1e-9 || purity_floor(right) < 1.0 - 1e-9)
    throw std::invalid_argument("PurePePair: non-pure ensemble state");
}

MixedPePair::MixedPePair(KeyedEnsemble l, KeyedEnsemble r, double eta, ErProxy proxy)
    : left(std::move(l)), right(std::move(r)), claimed_eta(eta), er_proxy(proxy) {
  check_same_space(left, right);
}

double entanglement_entropy(const DensityMatrix& state, Index dim_a, Index dim_b) {
  BipartiteState bp(state, dim_a, dim_b);
  return von_neumann_entropy(partial_trace(bp, Side::A));
}

EpfiPair from_pseudoresource(const PseudoresourcePair& pair) {
  double eta = pair.claimed_eta;
  if (!(eta > 2.0))
    throw std::invalid_argument("from_pseudoresource: requires eta > 2");
  double kappa = pair.oracle->diameter_kappa();
  if (!std::isfinite(kappa) || kappa <= 0.0)
    throw std::invalid_argument("from_pseudoresource: diameter_kappa not finite");
  GapResult gap = verify_resource_gap(pair);
  if (gap.status == GapStatus::indeterminate)
    throw std::runtime_error("from_pseudoresource: gap certification indeterminate");
  if (gap.status == GapStatus::violated)
    throw std::runtime_error("from_pseudoresource: resource gap below claimed eta");
  double delta = std::clamp((eta - 2.0) / kappa, 0.0, 1.0);
  return EpfiPair(pair.left, pair.right, delta, EpfiProvenance::from_pseudoresource);
}

EpfiPair from_pure_pseudoentanglement(const PurePePair& pair) {
  double eta = pair.claimed_eta;
  if (!(eta > kHalfInvE))
    throw std::invalid_argument("from_pure_pseudoentanglement: requires eta > 1/(2e)");

  // The entropy gap is exactly computable for pure families; verify it
  // before constructing anything.
  std::vector<double> le, re;
  for (const DensityMatrix& s : pair.left.states)
    le.push_back(entanglement_entropy(s, pair.left.dim_a, pair.left.dim_b));
  for (const DensityMatrix& s : pair.right.states)
    re.push_back(entanglement_entropy(s, pair.right.dim_a, pair.right.dim_b));
  double min_gap = std::numeric_limits<double>::infinity();
  for (double a : le)
    for (double b : re) min_gap = std::min(min_gap, std::abs(a - b));
  if (min_gap < eta - 1e-9)
    throw std::runtime_error("from_pure_pseudoentanglement: entropy gap " +
                             std::to_string(min_gap) + " below claimed eta");

  auto reduce = [](const KeyedEnsemble& e) {
    std::vector<DensityMatrix> reduced;
    reduced.reserve(e.size());
    for (const DensityMatrix& s : e.states)
      reduced.push_back(partial_trace(BipartiteState(s, e.dim_a, e.dim_b), Side::A));
    return KeyedEnsemble(e.key_len, e.keys, std::move(reduced), e.dim_a, 1);
  };

  double delta = std::clamp(
      (eta - kHalfInvE) / (2.0 * std::log2(static_cast<double>(pair.left.dim_a))), 0.0,
      1.0);
  return EpfiPair(reduce(pair.left), reduce(pair.right), delta,
                  EpfiProvenance::from_pure_pe);
}

EpfiPair from_mixed_pseudoentanglement(const MixedPePair& pair,
                                       const FreeSetOracle& oracle) {
  double eta = pair.claimed_eta;
  if (!(eta > 2.0))
    throw std::invalid_argument("from_mixed_pseudoentanglement: requires eta > 2");
  GapResult gap = verify_gap_with_oracle(pair.left, pair.right, oracle, eta);
  if (gap.status == GapStatus::indeterminate)
    throw std::runtime_error(
        "from_mixed_pseudoentanglement: gap certification indeterminate");
  if (gap.status == GapStatus::violated)
    throw std::runtime_error("from_mixed_pseudoentanglement: gap below claimed eta");
  double log_d = std::log2(static_cast<double>(pair.left.dim()));
  double delta = std::clamp((eta - 2.0) / log_d, 0.0, 1.0);
  return EpfiPair(pair.left, pair.right, delta, EpfiProvenance::from_mixed_pe);
}

EpfiPair from_mixed_pseudoentanglement(const MixedPePair& pair) {
  SeparabilityOracle oracle(pair.left.dim_a, pair.left.dim_b);
  return from_mixed_pseudoentanglement(pair, oracle);
}

PairwiseFarResult verify_pairwise_far(const EpfiPair& pair) {
  if (pair.left.size() * pair.right.size() > (1u << 20))
    throw std::invalid_argument("verify_pairwise_far: key product not exhaustible");
  double min_delta = 1.0;
  for (const DensityMatrix& a : pair.left.states)
    for (const DensityMatrix& b : pair.right.states)
      min_delta = std::min(min_delta, trace_distance(a, b));
  PairwiseFarResult out;
  out.min_delta = min_delta;
  out.report = make_bound_report("pairwise_far", pair.certified_delta, min_delta);
  return out;
}

double statistical_hiding_advantage(const EpfiPair& pair, int m) {
  if (m < 1) throw std::invalid_argument("statistical_hiding_advantage: m < 1");
  double bits = m * std::log2(static_cast<double>(pair.left.dim()));
  if (bits > 12.0 + 1e-9)
    throw std::invalid_argument("statistical_hiding_advantage: tensor power too large");

  auto mixture = [m](const KeyedEnsemble& e) {
    Index dim = 1;
    for (int i = 0; i < m; ++i) dim *= e.dim();
    ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
    for (const DensityMatrix& s : e.states) acc += tensor_power(s.mat(), m);
    acc /= static_cast<double>(e.size());
    return DensityMatrix::trusted(std::move(acc));
  };

  return trace_distance(mixture(pair.left), mixture(pair.right));
}

}  // namespace qrlab
