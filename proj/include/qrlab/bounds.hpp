#pragma once

// Closed-form continuity and amplification bounds, as pure scalar functions.

#include <string>

namespace qrlab {

// Comparison record: satisfied <=> lhs <= rhs + 1e-9.
struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  double slack = 0.0;  // rhs - lhs
};

inline constexpr double kBoundSlackTol = 1e-9;

BoundReport make_bound_report(std::string name, double lhs, double rhs);

// h(p) = -p log2 p - (1-p) log2(1-p); endpoints map to 0.
double binary_entropy(double p);

// 2 delta log2 d - delta log2 delta: entropy-difference continuity ceiling.
double fannes_bound(double delta, int d);

// eps * kappa + (1 + eps) h(eps / (1 + eps)).
double winter_resource_bound(double eps, double kappa);

// eps * log2 d + (1 + eps) h(eps / (1 + eps)).
double winter_entanglement_bound(double eps, int d);

// 1 - exp(-n delta^2 / 2): distinguishability floor for n-fold tensor powers.
double copies_amplification(double delta, int n);

// sqrt(1 - delta^2): fidelity ceiling at trace distance delta.
double binding_fidelity_bound(double delta);

}  // namespace qrlab
