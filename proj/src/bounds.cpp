#include "qrlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qrlab {

namespace {

void check_unit_interval(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument(std::string(what) + " outside [0, 1]");
}

}  // namespace

BoundReport make_bound_report(std::string name, double lhs, double rhs) {
  BoundReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.satisfied = lhs <= rhs + kBoundSlackTol;
  r.slack = rhs - lhs;
  return r;
}

double binary_entropy(double p) {
  check_unit_interval(p, "binary_entropy: p");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return std::max(h, 0.0);
}

double fannes_bound(double delta, int d) {
  check_unit_interval(delta, "fannes_bound: delta");
  if (d < 2) throw std::invalid_argument("fannes_bound: d < 2");
  if (delta == 0.0) return 0.0;
  // Uncapped correction term: 2 x log2 d - x log2 x dominates the sharp
  // entropy-difference maximum x log2(d-1) + h(x) at every dimension, so the
  // bound holds over the whole distance range.
  double c = -delta * std::log2(delta);
  return std::max(2.0 * delta * std::log2(static_cast<double>(d)) + c, 0.0);
}

double winter_resource_bound(double eps, double kappa) {
  check_unit_interval(eps, "winter_resource_bound: eps");
  if (kappa < 0.0) throw std::invalid_argument("winter_resource_bound: kappa < 0");
  if (eps == 0.0) return 0.0;
  return std::max(eps * kappa + (1.0 + eps) * binary_entropy(eps / (1.0 + eps)), 0.0);
}

double winter_entanglement_bound(double eps, int d) {
  if (d < 2) throw std::invalid_argument("winter_entanglement_bound: d < 2");
  return winter_resource_bound(eps, std::log2(static_cast<double>(d)));
}

double copies_amplification(double delta, int n) {
  check_unit_interval(delta, "copies_amplification: delta");
  if (n < 0) throw std::invalid_argument("copies_amplification: n < 0");
  // Rate delta^2/2 per copy, from fidelity multiplicativity and the two
  // fidelity/distance inequalities: distance(n) >= 1 - F^{n/2} and
  // F <= 1 - delta^2.
  return std::clamp(1.0 - std::exp(-0.5 * n * delta * delta), 0.0, 1.0);
}

double binding_fidelity_bound(double delta) {
  check_unit_interval(delta, "binding_fidelity_bound: delta");
  return std::sqrt(std::max(1.0 - delta * delta, 0.0));
}

}  // namespace qrlab
