#include "qrlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace qrlab {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b) {
  require(a.dim() == b.dim(), "dimension mismatch: " + std::to_string(a.dim()) +
                                  " vs " + std::to_string(b.dim()));
}

double log2_clamped(double x) { return std::log2(x); }

}  // namespace

EigSystem eig_hermitian(const ComplexMatrix& m) {
  require(m.rows() == m.cols(), "eig_hermitian: matrix not square");
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigendecomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m) {
  EigSystem es = eig_hermitian(m);
  RealVector vals = es.values;
  for (Index i = 0; i < vals.size(); ++i) {
    if (vals[i] < -kEigClampTol)
      throw std::domain_error("matrix_sqrt_psd: indefinite input, eigenvalue " +
                              std::to_string(vals[i]));
    vals[i] = std::sqrt(std::max(vals[i], 0.0));
  }
  return es.vectors * vals.asDiagonal() * es.vectors.adjoint();
}

double max_abs_entry(const ComplexMatrix& m) {
  return m.cwiseAbs().maxCoeff();
}

DensityMatrix::DensityMatrix(ComplexMatrix mat) : mat_(std::move(mat)) {
  require(mat_.rows() == mat_.cols() && mat_.rows() > 0,
          "DensityMatrix: matrix not square");
  require(mat_.allFinite(), "DensityMatrix: non-finite entry");
  double herm = max_abs_entry(mat_ - mat_.adjoint());
  require(herm <= kValidityTol,
          "DensityMatrix: not Hermitian, max |M - M^dag| = " + std::to_string(herm));
  double tr_err = std::abs(mat_.trace() - std::complex<double>(1.0, 0.0));
  require(tr_err <= kValidityTol,
          "DensityMatrix: trace deviates from 1 by " + std::to_string(tr_err));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (mat_ + mat_.adjoint()),
                                                      Eigen::EigenvaluesOnly);
  double min_eig = solver.eigenvalues().minCoeff();
  require(min_eig >= -kValidityTol,
          "DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
}

DensityMatrix::DensityMatrix(ComplexMatrix mat, SkipEigCheck) : mat_(std::move(mat)) {
  require(mat_.rows() == mat_.cols() && mat_.rows() > 0,
          "DensityMatrix: matrix not square");
  require(mat_.allFinite(), "DensityMatrix: non-finite entry");
  require(max_abs_entry(mat_ - mat_.adjoint()) <= kValidityTol,
          "DensityMatrix: not Hermitian");
  require(std::abs(mat_.trace() - std::complex<double>(1.0, 0.0)) <= kValidityTol,
          "DensityMatrix: trace deviates from 1");
}

DensityMatrix DensityMatrix::trusted(ComplexMatrix mat) {
  return DensityMatrix(std::move(mat), SkipEigCheck{});
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return trusted(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityMatrix::purity() const {
  // Tr rho^2 equals the squared Frobenius norm for Hermitian rho.
  return mat_.squaredNorm();
}

PureState::PureState(ComplexVector amps) : amps_(std::move(amps)) {
  require(amps_.size() > 0, "PureState: empty amplitude vector");
  require(amps_.allFinite(), "PureState: non-finite amplitude");
  double norm_err = std::abs(amps_.norm() - 1.0);
  require(norm_err <= kValidityTol,
          "PureState: norm deviates from 1 by " + std::to_string(norm_err));
}

PureState PureState::basis_state(Index dim, Index which) {
  ComplexVector v = ComplexVector::Zero(dim);
  v[which] = 1.0;
  return PureState(std::move(v));
}

DensityMatrix PureState::projector() const {
  return DensityMatrix::trusted(amps_ * amps_.adjoint());
}

BipartiteState::BipartiteState(DensityMatrix state, Index dim_a, Index dim_b)
    : state_(std::move(state)), dim_a_(dim_a), dim_b_(dim_b) {
  require(dim_a_ > 0 && dim_b_ > 0, "BipartiteState: nonpositive subsystem dim");
  require(dim_a_ * dim_b_ == state_.dim(),
          "BipartiteState: dA*dB != dim (" + std::to_string(dim_a_) + "*" +
              std::to_string(dim_b_) + " vs " + std::to_string(state_.dim()) + ")");
}

BipartiteState BipartiteState::from_pure(const PureState& psi, Index dim_a, Index dim_b) {
  return BipartiteState(psi.projector(), dim_a, dim_b);
}

PovmPair::PovmPair(ComplexMatrix e0, ComplexMatrix e1)
    : e0_(std::move(e0)), e1_(std::move(e1)) {
  require(e0_.rows() == e0_.cols() && e1_.rows() == e1_.cols() &&
              e0_.rows() == e1_.rows(),
          "PovmPair: element dimensions inconsistent");
  ComplexMatrix sum = e0_ + e1_;
  require(max_abs_entry(sum - ComplexMatrix::Identity(sum.rows(), sum.cols())) <=
              kValidityTol,
          "PovmPair: E0 + E1 != I");
  for (const ComplexMatrix* e : {&e0_, &e1_}) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (*e + e->adjoint()),
                                                        Eigen::EigenvaluesOnly);
    require(solver.eigenvalues().minCoeff() >= -kValidityTol,
            "PovmPair: element not positive semidefinite");
  }
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

ComplexMatrix tensor_power(const ComplexMatrix& m, int n) {
  require(n >= 0, "tensor_power: negative exponent");
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int i = 0; i < n; ++i) out = tensor_product(out, m);
  return out;
}

ComplexVector tensor_power(const ComplexVector& v, int n) {
  require(n >= 0, "tensor_power: negative exponent");
  ComplexVector out = ComplexVector::Ones(1);
  for (int i = 0; i < n; ++i) out = tensor_product(out, v);
  return out;
}

DensityMatrix partial_trace(const BipartiteState& rho, Side keep) {
  const ComplexMatrix& m = rho.state().mat();
  Index da = rho.dim_a(), db = rho.dim_b();
  if (keep == Side::A) {
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (Index a = 0; a < da; ++a)
      for (Index a2 = 0; a2 < da; ++a2)
        for (Index b = 0; b < db; ++b)
          out(a, a2) += m(a * db + b, a2 * db + b);
    return DensityMatrix::trusted(std::move(out));
  }
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (Index b = 0; b < db; ++b)
    for (Index b2 = 0; b2 < db; ++b2)
      for (Index a = 0; a < da; ++a)
        out(b, b2) += m(a * db + b, a * db + b2);
  return DensityMatrix::trusted(std::move(out));
}

ComplexMatrix partial_trace_multi(const ComplexMatrix& rho,
                                  const std::vector<Index>& dims,
                                  const std::vector<bool>& keep) {
  if (dims.size() != keep.size())
    throw std::invalid_argument("partial_trace_multi: dims/keep size mismatch");
  Index total = 1, kept = 1, traced = 1;
  for (size_t i = 0; i < dims.size(); ++i) {
    total *= dims[i];
    (keep[i] ? kept : traced) *= dims[i];
  }
  if (total != rho.rows() || total != rho.cols())
    throw std::invalid_argument("partial_trace_multi: dims do not match matrix");

  // Strides of each factor in the flat A-major index.
  std::vector<Index> stride(dims.size());
  Index s = 1;
  for (size_t i = dims.size(); i-- > 0;) {
    stride[i] = s;
    s *= dims[i];
  }

  auto flat_index = [&](Index kept_idx, Index traced_idx) {
    Index idx = 0;
    // Decode kept_idx / traced_idx factor by factor (both A-major over their
    // own sub-lists).
    Index kq = kept, tq = traced;
    for (size_t i = 0; i < dims.size(); ++i) {
      if (keep[i]) {
        kq /= dims[i];
        idx += (kept_idx / kq) * stride[i];
        kept_idx %= kq;
      } else {
        tq /= dims[i];
        idx += (traced_idx / tq) * stride[i];
        traced_idx %= tq;
      }
    }
    return idx;
  };

  ComplexMatrix out = ComplexMatrix::Zero(kept, kept);
  for (Index r = 0; r < kept; ++r)
    for (Index c = 0; c < kept; ++c) {
      std::complex<double> acc = 0.0;
      for (Index t = 0; t < traced; ++t)
        acc += rho(flat_index(r, t), flat_index(c, t));
      out(r, c) = acc;
    }
  return out;
}

ComplexMatrix partial_transpose_b(const ComplexMatrix& m, Index dim_a, Index dim_b) {
  if (dim_a * dim_b != m.rows() || m.rows() != m.cols())
    throw std::invalid_argument("partial_transpose_b: dims do not match matrix");
  ComplexMatrix out(m.rows(), m.cols());
  for (Index a = 0; a < dim_a; ++a)
    for (Index a2 = 0; a2 < dim_a; ++a2)
      for (Index b = 0; b < dim_b; ++b)
        for (Index b2 = 0; b2 < dim_b; ++b2)
          out(a * dim_b + b, a2 * dim_b + b2) = m(a * dim_b + b2, a2 * dim_b + b);
  return out;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  EigSystem es = eig_hermitian(rho.mat() - sigma.mat());
  double d = 0.5 * es.values.cwiseAbs().sum();
  return std::clamp(d, 0.0, 1.0);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  // A numerically pure argument reduces the matrix formula to a quadratic
  // form, which is far more accurate than square roots of tiny eigenvalues.
  for (auto [pure, other] : {std::pair{&rho, &sigma}, std::pair{&sigma, &rho}}) {
    if (pure->purity() >= 1.0 - 1e-12) {
      EigSystem es = eig_hermitian(pure->mat());
      ComplexVector psi = es.vectors.col(es.values.size() - 1);
      return std::clamp((psi.adjoint() * other->mat() * psi)(0, 0).real(), 0.0, 1.0);
    }
  }
  ComplexMatrix sqrt_rho = matrix_sqrt_psd(rho.mat());
  ComplexMatrix inner = sqrt_rho * sigma.mat() * sqrt_rho;
  EigSystem es = eig_hermitian(inner);
  double root_sum = 0.0;
  for (Index i = 0; i < es.values.size(); ++i)
    root_sum += std::sqrt(std::max(es.values[i], 0.0));
  return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

double fidelity_with_pure(const DensityMatrix& rho, const ComplexVector& target) {
  if (rho.dim() != target.size())
    throw std::invalid_argument("fidelity_with_pure: dimension mismatch");
  double f = (target.adjoint() * rho.mat() * target)(0, 0).real();
  return std::clamp(f, 0.0, 1.0);
}

double shannon_entropy_bits(const RealVector& probs) {
  double h = 0.0;
  for (Index i = 0; i < probs.size(); ++i) {
    double p = probs[i];
    if (p > 0.0) h -= p * log2_clamped(p);
  }
  return h;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  EigSystem es = eig_hermitian(rho.mat());
  RealVector clamped = es.values.cwiseMax(0.0);
  return std::max(shannon_entropy_bits(clamped), 0.0);
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  EigSystem er = eig_hermitian(rho.mat());
  EigSystem es = eig_hermitian(sigma.mat());

  // Mass of rho outside the support of sigma.
  double outside = 0.0;
  for (Index j = 0; j < es.values.size(); ++j) {
    if (es.values[j] <= kSupportTol) {
      ComplexVector w = es.vectors.col(j);
      outside += (w.adjoint() * rho.mat() * w)(0, 0).real();
    }
  }
  if (outside > kSupportTol) return std::numeric_limits<double>::infinity();

  double tr_rho_log_rho = 0.0;
  for (Index i = 0; i < er.values.size(); ++i) {
    double p = er.values[i];
    if (p > kSupportTol) tr_rho_log_rho += p * log2_clamped(p);
  }
  double tr_rho_log_sigma = 0.0;
  for (Index j = 0; j < es.values.size(); ++j) {
    double q = es.values[j];
    if (q > kSupportTol) {
      ComplexVector w = es.vectors.col(j);
      double overlap = (w.adjoint() * rho.mat() * w)(0, 0).real();
      tr_rho_log_sigma += std::max(overlap, 0.0) * log2_clamped(q);
    }
  }
  return std::max(tr_rho_log_rho - tr_rho_log_sigma, 0.0);
}

HelstromResult helstrom_measurement(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  EigSystem es = eig_hermitian(rho.mat() - sigma.mat());
  Index d = rho.dim();
  ComplexMatrix e0 = ComplexMatrix::Zero(d, d);
  for (Index i = 0; i < d; ++i)
    if (es.values[i] >= 0.0) e0 += es.vectors.col(i) * es.vectors.col(i).adjoint();
  ComplexMatrix e1 = ComplexMatrix::Identity(d, d) - e0;
  // Symmetrize away rounding before the POVM validity check.
  e0 = 0.5 * (e0 + e0.adjoint());
  e1 = ComplexMatrix::Identity(d, d) - e0;
  double success = 0.5 * (1.0 + trace_distance(rho, sigma));
  return {PovmPair(std::move(e0), std::move(e1)), success};
}

double povm_success_prob(const PovmPair& povm, const DensityMatrix& rho,
                         const DensityMatrix& sigma) {
  double p0 = (povm.e0() * rho.mat()).trace().real();
  double p1 = (povm.e1() * sigma.mat()).trace().real();
  return 0.5 * (p0 + p1);
}

}  // namespace qrlab
