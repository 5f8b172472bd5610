#include "qrlab/commitment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qrlab {

namespace {

constexpr double kUnitaryTol = 1e-9;
constexpr double kRankTol = 1e-10;

void check_unitary(const ComplexMatrix& u) {
  ComplexMatrix gram = u.adjoint() * u;
  if (max_abs_entry(gram - ComplexMatrix::Identity(u.rows(), u.cols())) > kUnitaryTol)
    throw std::invalid_argument("circuit is not unitary within tolerance");
}

std::size_t key_index(const std::vector<std::uint32_t>& keys, std::uint32_t key) {
  auto it = std::find(keys.begin(), keys.end(), key);
  if (it == keys.end()) throw std::invalid_argument("unknown key");
  return static_cast<std::size_t>(it - keys.begin());
}

void check_copy_budget(Index dim_c, Index dim_r, int copies) {
  if (copies < 1) throw std::invalid_argument("copies must be >= 1");
  double bits = copies * std::log2(static_cast<double>(dim_c * dim_r));
  if (bits > 12.0 + 1e-9)
    throw std::invalid_argument("copy count blows up the joint dimension");
}

// Eigen-decomposition sorted by (eigenvalue desc, lexicographic real parts):
// the deterministic ordering used for purifications and attack alignment.
EigSystem eig_sorted_desc(const ComplexMatrix& m) {
  EigSystem es = eig_hermitian(m);
  Index d = es.values.size();
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (std::abs(es.values[a] - es.values[b]) > 1e-12)
      return es.values[a] > es.values[b];
    for (Index r = 0; r < d; ++r) {
      double ra = es.vectors(r, a).real(), rb = es.vectors(r, b).real();
      if (std::abs(ra - rb) > 1e-12) return ra > rb;
    }
    return false;
  });
  EigSystem out;
  out.values.resize(d);
  out.vectors.resize(d, d);
  for (Index i = 0; i < d; ++i) {
    out.values[i] = es.values[order[i]];
    ComplexVector col = es.vectors.col(order[i]);
    // Phase fix: make the largest-magnitude component real positive.
    Index arg_max = 0;
    for (Index r = 1; r < d; ++r)
      if (std::abs(col[r]) > std::abs(col[arg_max])) arg_max = r;
    std::complex<double> ph = col[arg_max];
    if (std::abs(ph) > 0) col *= std::conj(ph) / std::abs(ph);
    out.vectors.col(i) = col;
  }
  return out;
}

std::vector<Index> interleaved_dims(Index dim_c, Index dim_r, int copies) {
  std::vector<Index> dims;
  for (int i = 0; i < copies; ++i) {
    dims.push_back(dim_c);
    dims.push_back(dim_r);
  }
  return dims;
}

}  // namespace

ComplexVector permute_factors(const ComplexVector& v, const std::vector<Index>& dims,
                              const std::vector<int>& perm) {
  if (dims.size() != perm.size())
    throw std::invalid_argument("permute_factors: dims/perm size mismatch");
  Index total = 1;
  for (Index d : dims) total *= d;
  if (total != v.size()) throw std::invalid_argument("permute_factors: size mismatch");

  std::vector<Index> new_dims(perm.size());
  for (std::size_t j = 0; j < perm.size(); ++j) new_dims[j] = dims[perm[j]];

  std::vector<Index> old_stride(dims.size());
  Index s = 1;
  for (std::size_t i = dims.size(); i-- > 0;) {
    old_stride[i] = s;
    s *= dims[i];
  }

  ComplexVector out(total);
  for (Index idx = 0; idx < total; ++idx) {
    // Decode idx over new_dims, accumulate into the old flat index.
    Index rem = idx, old_idx = 0;
    for (std::size_t j = 0; j < perm.size(); ++j) {
      Index block = rem;
      for (std::size_t j2 = j + 1; j2 < perm.size(); ++j2) block /= new_dims[j2];
      block %= new_dims[j];
      old_idx += block * old_stride[perm[j]];
    }
    out[idx] = v[old_idx];
  }
  return out;
}

ComplexVector apply_on_factor(const ComplexVector& v, const std::vector<Index>& dims,
                              int slot, const ComplexMatrix& u) {
  Index total = 1;
  for (Index d : dims) total *= d;
  if (total != v.size()) throw std::invalid_argument("apply_on_factor: size mismatch");
  Index d = dims[slot];
  if (u.rows() != d || u.cols() != d)
    throw std::invalid_argument("apply_on_factor: unitary dim mismatch");

  Index right = 1;
  for (std::size_t i = slot + 1; i < dims.size(); ++i) right *= dims[i];
  Index left = total / (d * right);

  ComplexVector out = ComplexVector::Zero(total);
  for (Index l = 0; l < left; ++l)
    for (Index r = 0; r < right; ++r) {
      Index base = l * d * right + r;
      for (Index a = 0; a < d; ++a) {
        std::complex<double> acc = 0.0;
        for (Index b = 0; b < d; ++b) acc += u(a, b) * v[base + b * right];
        out[base + a * right] = acc;
      }
    }
  return out;
}

ComplexMatrix extend_to_unitary(const ComplexMatrix& inputs, const ComplexMatrix& outputs) {
  Index n = inputs.rows();
  Index k = inputs.cols();
  if (outputs.rows() != n || outputs.cols() != k)
    throw std::invalid_argument("extend_to_unitary: shape mismatch");

  auto complete = [n](const ComplexMatrix& cols) {
    ComplexMatrix basis(n, n);
    Index have = cols.cols();
    basis.leftCols(have) = cols;
    Index filled = have;
    for (Index c = 0; c < n && filled < n; ++c) {
      ComplexVector v = ComplexVector::Zero(n);
      v[c] = 1.0;
      for (Index j = 0; j < filled; ++j)
        v -= (basis.col(j).adjoint() * v)(0, 0) * basis.col(j);
      double norm = v.norm();
      if (norm > 1e-8) {
        basis.col(filled++) = v / norm;
      }
    }
    if (filled != n) throw std::runtime_error("extend_to_unitary: completion failed");
    return basis;
  };

  ComplexMatrix bin = complete(inputs);
  ComplexMatrix bout = complete(outputs);
  return bout * bin.adjoint();
}

CommitCircuitFamily::CommitCircuitFamily(int key_len, Index dim_c, Index dim_r,
                                         std::vector<std::uint32_t> keys0,
                                         std::vector<ComplexMatrix> circuits0,
                                         std::vector<std::uint32_t> keys1,
                                         std::vector<ComplexMatrix> circuits1,
                                         int default_copies)
    : key_len_(key_len),
      dim_c_(dim_c),
      dim_r_(dim_r),
      default_copies_(default_copies),
      keys0_(std::move(keys0)),
      keys1_(std::move(keys1)),
      circuits0_(std::move(circuits0)),
      circuits1_(std::move(circuits1)) {
  if (dim_c_ < 1 || dim_r_ < 1) throw std::invalid_argument("bad register dims");
  if (keys0_.empty() || keys0_.size() != circuits0_.size() || keys1_.empty() ||
      keys1_.size() != circuits1_.size())
    throw std::invalid_argument("keys/circuits mismatch or empty");
  for (const auto* family : {&circuits0_, &circuits1_})
    for (const ComplexMatrix& u : *family) {
      if (u.rows() != dim_c_ * dim_r_ || u.cols() != dim_c_ * dim_r_)
        throw std::invalid_argument("circuit dim != dC*dR");
      check_unitary(u);
    }
}

const std::vector<std::uint32_t>& CommitCircuitFamily::keys(int bit) const {
  if (bit != 0 && bit != 1) throw std::invalid_argument("bit out of range");
  return bit == 0 ? keys0_ : keys1_;
}

const ComplexMatrix& CommitCircuitFamily::circuit(int bit, std::uint32_t key) const {
  if (bit != 0 && bit != 1) throw std::invalid_argument("bit out of range");
  const auto& ks = bit == 0 ? keys0_ : keys1_;
  const auto& cs = bit == 0 ? circuits0_ : circuits1_;
  return cs[key_index(ks, key)];
}

CommitmentTranscript::CommitmentTranscript(int b, std::uint32_t k, int m, PureState j,
                                           DensityMatrix c, Index dim_c, Index dim_r)
    : bit(b), key(k), copies(m), joint(std::move(j)), committed(std::move(c)) {
  // committed must equal the joint state reduced onto the C registers. The
  // check needs the joint density matrix, so it is limited to dimensions
  // where that is affordable.
  if (joint.dim() <= 1024) {
    std::vector<Index> dims = interleaved_dims(dim_c, dim_r, copies);
    std::vector<bool> keep(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) keep[i] = (i % 2 == 0);
    ComplexMatrix jm = joint.amps() * joint.amps().adjoint();
    ComplexMatrix reduced = partial_trace_multi(jm, dims, keep);
    if (max_abs_entry(reduced - committed.mat()) > 1e-9)
      throw std::invalid_argument("transcript: committed state is not the C reduction");
  }
}

CommitmentTranscript commit(const CommitCircuitFamily& scheme, int bit,
                            std::uint32_t key, int copies) {
  check_copy_budget(scheme.dim_c(), scheme.dim_r(), copies);
  const ComplexMatrix& q = scheme.circuit(bit, key);
  ComplexVector zero = ComplexVector::Zero(scheme.dim_c() * scheme.dim_r());
  zero[0] = 1.0;
  ComplexVector single = q * zero;
  ComplexVector joint = tensor_power(single, copies);

  BipartiteState one_copy(DensityMatrix::trusted(single * single.adjoint()),
                          scheme.dim_c(), scheme.dim_r());
  DensityMatrix c1 = partial_trace(one_copy, Side::A);
  DensityMatrix committed = DensityMatrix::trusted(tensor_power(c1.mat(), copies));
  return CommitmentTranscript(bit, key, copies, PureState(std::move(joint)),
                              std::move(committed), scheme.dim_c(), scheme.dim_r());
}

double reveal_verify(const CommitCircuitFamily& scheme, const PureState& transcript_state,
                     int bit, std::uint32_t key, int copies, Index extra_dim) {
  const ComplexMatrix& q = scheme.circuit(bit, key);
  std::vector<Index> dims;
  for (int i = 0; i < copies; ++i) dims.push_back(scheme.dim_c() * scheme.dim_r());
  if (extra_dim > 1) dims.push_back(extra_dim);
  Index total = 1;
  for (Index d : dims) total *= d;
  if (transcript_state.dim() != total)
    throw std::invalid_argument("reveal_verify: state dim mismatch");

  ComplexVector v = transcript_state.amps();
  ComplexMatrix q_dag = q.adjoint();
  for (int i = 0; i < copies; ++i) v = apply_on_factor(v, dims, i, q_dag);

  // Probability of every (C,R) register measuring |0>, any attacker content.
  double acc = 0.0;
  for (Index z = 0; z < extra_dim; ++z) acc += std::norm(v[z]);
  return std::clamp(acc, 0.0, 1.0);
}

AttackResult optimal_opening_attack(const CommitCircuitFamily& scheme, std::uint32_t key,
                                    std::uint32_t key_other, int copies) {
  check_copy_budget(scheme.dim_c(), scheme.dim_r(), copies);
  Index dc = scheme.dim_c(), dr = scheme.dim_r();
  CommitmentTranscript t0 = commit(scheme, 0, key, copies);
  CommitmentTranscript t1 = commit(scheme, 1, key_other, copies);

  Index nc = t0.committed.dim();   // dC^m
  Index nr = 1;
  for (int i = 0; i < copies; ++i) nr *= dr;  // dR^m

  // Reorder both joint states to the C^m (x) R^m cut.
  std::vector<Index> dims = interleaved_dims(dc, dr, copies);
  std::vector<int> perm;
  for (int i = 0; i < copies; ++i) perm.push_back(2 * i);
  for (int i = 0; i < copies; ++i) perm.push_back(2 * i + 1);
  ComplexVector psi0 = permute_factors(t0.joint.amps(), dims, perm);
  ComplexVector psi1 = permute_factors(t1.joint.amps(), dims, perm);
  Eigen::Map<const ComplexMatrix> m0(psi0.data(), nr, nc);  // column-major: [r, c]
  Eigen::Map<const ComplexMatrix> m1(psi1.data(), nr, nc);

  EigSystem e0 = eig_sorted_desc(t0.committed.mat());
  EigSystem e1 = eig_sorted_desc(t1.committed.mat());
  Index r0 = 0, r1 = 0;
  while (r0 < nc && e0.values[r0] > kRankTol) ++r0;
  while (r1 < nc && e1.values[r1] > kRankTol) ++r1;
  if (r0 == 0 || r1 == 0) throw std::runtime_error("attack: degenerate committed state");

  // Ancilla: level 0 carries the aligned component, higher levels absorb the
  // orthonormalization defect.
  Index nz = 1 + (r0 + r1 - 1) / r1;

  // Relative (Schmidt-partner) vectors in R^m for each retained eigenvector.
  ComplexMatrix rel0(nr, r0), rel1(nr, r1);
  for (Index i = 0; i < r0; ++i)
    rel0.col(i) = (m0 * e0.vectors.col(i).conjugate()) / std::sqrt(e0.values[i]);
  for (Index j = 0; j < r1; ++j)
    rel1.col(j) = (m1 * e1.vectors.col(j).conjugate()) / std::sqrt(e1.values[j]);

  // Overlap kernel K_{ji} = sqrt(mu_j lambda_i) <w_j|v_i>.
  ComplexMatrix kmat(r1, r0);
  for (Index j = 0; j < r1; ++j)
    for (Index i = 0; i < r0; ++i)
      kmat(j, i) = std::sqrt(e1.values[j] * e0.values[i]) *
                   (e1.vectors.col(j).adjoint() * e0.vectors.col(i))(0, 0);

  // Coefficients c_{ij} = <q_j 0|U|r_i 0> maximizing |Tr[K c]| = Tr|K| under
  // the operator-norm constraint that unitarity imposes.
  Eigen::JacobiSVD<ComplexMatrix> svd(kmat, Eigen::ComputeThinU | Eigen::ComputeThinV);
  ComplexMatrix c = svd.matrixV() * svd.matrixU().adjoint();  // r0 x r1

  // Inputs |r_i>|0_Z>, raw outputs sum_j c_ij |q_j>|0_Z>.
  Index nrz = nr * nz;
  ComplexMatrix x_in = ComplexMatrix::Zero(nrz, r0);
  for (Index i = 0; i < r0; ++i)
    for (Index r = 0; r < nr; ++r) x_in(r * nz + 0, i) = rel0(r, i);
  ComplexMatrix y_raw = ComplexMatrix::Zero(nrz, r0);
  for (Index i = 0; i < r0; ++i)
    for (Index j = 0; j < r1; ++j)
      for (Index r = 0; r < nr; ++r) y_raw(r * nz + 0, i) += c(i, j) * rel1(r, j);

  // Restore orthonormality with components on fresh Z levels, orthogonal to
  // every |q_j>|0_Z>.
  ComplexMatrix gram = y_raw.adjoint() * y_raw;
  ComplexMatrix defect = ComplexMatrix::Identity(r0, r0) - gram;
  ComplexMatrix t = matrix_sqrt_psd(defect.conjugate());
  // Fresh directions: |q_(i mod r1)> |1 + i / r1>; orthogonal to the z=0 layer.
  ComplexMatrix y = y_raw;
  for (Index i = 0; i < r0; ++i)
    for (Index l = 0; l < r0; ++l) {
      Index z_level = 1 + l / r1;
      Index q_idx = l % r1;
      if (z_level >= nz)
        throw std::runtime_error("attack: ancilla too small for completion");
      for (Index r = 0; r < nr; ++r)
        y(r * nz + z_level, i) += t(i, l) * rel1(r, q_idx);
    }

  ComplexMatrix u = extend_to_unitary(x_in, y);

  // Attacked state: (I_{C^m} (x) U) applied to psi0 (x) |0_Z>.
  ComplexVector att_cut = ComplexVector::Zero(nc * nrz);
  for (Index cc = 0; cc < nc; ++cc) {
    ComplexVector block = ComplexVector::Zero(nrz);
    for (Index r = 0; r < nr; ++r) block[r * nz + 0] = m0(r, cc);
    ComplexVector mapped = u * block;
    att_cut.segment(cc * nrz, nrz) = mapped;
  }

  // Acceptance amplitude onto the honest bit-1 state, attacker register free.
  ComplexVector zeta = ComplexVector::Zero(nz);
  for (Index cc = 0; cc < nc; ++cc)
    for (Index r = 0; r < nr; ++r) {
      std::complex<double> target_amp = m1(r, cc);
      if (target_amp == std::complex<double>(0.0, 0.0)) continue;
      for (Index z = 0; z < nz; ++z)
        zeta[z] += std::conj(target_amp) * att_cut[cc * nrz + r * nz + z];
    }
  double achieved = zeta.squaredNorm();

  // Back to copy-interleaved register order with Z trailing.
  std::vector<Index> cut_dims;
  for (int i = 0; i < copies; ++i) cut_dims.push_back(dc);
  for (int i = 0; i < copies; ++i) cut_dims.push_back(dr);
  cut_dims.push_back(nz);
  std::vector<int> inv_perm(2 * copies + 1);
  for (int i = 0; i < copies; ++i) {
    inv_perm[2 * i] = i;              // C_i lives at cut slot i
    inv_perm[2 * i + 1] = copies + i; // R_i lives at cut slot copies + i
  }
  inv_perm[2 * copies] = 2 * copies;
  ComplexVector att = permute_factors(att_cut, cut_dims, inv_perm);

  AttackResult out{fidelity(t0.committed, t1.committed), std::move(u), nz, achieved,
                   PureState(std::move(att))};
  if (out.achieved_overlap > out.success_prob + 1e-6)
    throw std::logic_error("attack overlap exceeds the fidelity ceiling");
  return out;
}

CommitCircuitFamily build_from_epfi(const EpfiPair& pair, int copies) {
  if (pair.left.key_len != pair.right.key_len)
    throw std::invalid_argument("build_from_epfi: key lengths differ");
  Index dc = pair.left.dim();

  Index max_rank = 1;
  auto rank_of = [](const DensityMatrix& s) {
    EigSystem es = eig_hermitian(s.mat());
    Index r = 0;
    for (Index i = 0; i < es.values.size(); ++i)
      if (es.values[i] > kRankTol) ++r;
    return std::max<Index>(r, 1);
  };
  for (const DensityMatrix& s : pair.left.states) max_rank = std::max(max_rank, rank_of(s));
  for (const DensityMatrix& s : pair.right.states) max_rank = std::max(max_rank, rank_of(s));
  Index dr = max_rank;

  auto purification_circuit = [&](const DensityMatrix& s) {
    EigSystem es = eig_sorted_desc(s.mat());
    ComplexVector psi = ComplexVector::Zero(dc * dr);
    for (Index i = 0; i < dc && i < dr; ++i) {
      if (es.values[i] <= kRankTol) break;
      double amp = std::sqrt(es.values[i]);
      for (Index c = 0; c < dc; ++c) psi[c * dr + i] += amp * es.vectors(c, i);
    }
    psi /= psi.norm();
    ComplexMatrix in = ComplexMatrix::Zero(dc * dr, 1);
    in(0, 0) = 1.0;
    ComplexMatrix outc(dc * dr, 1);
    outc.col(0) = psi;
    return extend_to_unitary(in, outc);
  };

  std::vector<ComplexMatrix> c0, c1;
  for (const DensityMatrix& s : pair.left.states) c0.push_back(purification_circuit(s));
  for (const DensityMatrix& s : pair.right.states) c1.push_back(purification_circuit(s));

  CommitCircuitFamily scheme(pair.left.key_len, dc, dr, pair.left.keys, std::move(c0),
                             pair.right.keys, std::move(c1), copies);
  scheme.mark_synthesized();
  return scheme;
}

double statistical_hiding_of_scheme(const CommitCircuitFamily& scheme, int copies) {
  check_copy_budget(scheme.dim_c(), 1, copies);
  auto mixture = [&](int bit) {
    Index dim = 1;
    for (int i = 0; i < copies; ++i) dim *= scheme.dim_c();
    ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
    for (std::uint32_t k : scheme.keys(bit))
      acc += commit(scheme, bit, k, copies).committed.mat();
    acc /= static_cast<double>(scheme.keys(bit).size());
    return DensityMatrix::trusted(std::move(acc));
  };
  return trace_distance(mixture(0), mixture(1));
}

}  // namespace qrlab
