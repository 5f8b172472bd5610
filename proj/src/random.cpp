#include "qrlab/random.hpp"

#include <cmath>
#include <numbers>

namespace qrlab {

namespace {

// FNV-1a, used only to derive per-label seeds.
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

Rng Rng::stream(std::uint64_t seed, std::string_view label) {
  return Rng(seed ^ fnv1a(label));
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  // Rejection sampling keeps the distribution exact.
  std::uint64_t limit = ~0ull - ~0ull % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1, u2;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::complex<double> Rng::normal_complex() {
  double re = normal();
  double im = normal();
  return {re, im};
}

ComplexVector random_pure_vector(Rng& rng, Index dim) {
  ComplexVector v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = rng.normal_complex();
  v /= v.norm();
  return v;
}

PureState random_pure_state(Rng& rng, Index dim) {
  return PureState(random_pure_vector(rng, dim));
}

ComplexMatrix random_unitary(Rng& rng, Index dim) {
  ComplexMatrix g(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) g(i, j) = rng.normal_complex();
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < dim; ++i) {
    std::complex<double> d = r(i, i);
    double a = std::abs(d);
    q.col(i) *= (a > 0.0) ? d / a : std::complex<double>(1.0, 0.0);
  }
  return q;
}

DensityMatrix random_density_matrix(Rng& rng, Index dim, Index rank) {
  if (rank <= 0 || rank > dim) rank = dim;
  ComplexMatrix g(dim, rank);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < rank; ++j) g(i, j) = rng.normal_complex();
  ComplexMatrix w = g * g.adjoint();
  w /= w.trace().real();
  w = 0.5 * (w + w.adjoint());
  return DensityMatrix::trusted(std::move(w));
}

PovmPair random_povm_pair(Rng& rng, Index dim) {
  ComplexMatrix u = random_unitary(rng, dim);
  RealVector vals(dim);
  for (Index i = 0; i < dim; ++i) vals[i] = rng.uniform();
  ComplexMatrix e0 = u * vals.cast<std::complex<double>>().asDiagonal() * u.adjoint();
  e0 = 0.5 * (e0 + e0.adjoint());
  ComplexMatrix e1 = ComplexMatrix::Identity(dim, dim) - e0;
  return PovmPair(std::move(e0), std::move(e1));
}

}  // namespace qrlab
