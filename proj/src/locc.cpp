#include "qrlab/locc.hpp"

#include "qrlab/commitment.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace qrlab {

namespace {

constexpr double kBranchPrune = 1e-15;
constexpr Index kMaxDensityDim = 1024;
constexpr Index kMaxVectorDim = 4096;

ComplexMatrix gate_matrix(const Gate& g) {
  using C = std::complex<double>;
  const double s = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::H: {
      ComplexMatrix m(2, 2);
      m << s, s, s, -s;
      return m;
    }
    case GateKind::X: {
      ComplexMatrix m = ComplexMatrix::Zero(2, 2);
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      return m;
    }
    case GateKind::Z: {
      ComplexMatrix m = ComplexMatrix::Identity(2, 2);
      m(1, 1) = -1.0;
      return m;
    }
    case GateKind::S: {
      ComplexMatrix m = ComplexMatrix::Identity(2, 2);
      m(1, 1) = C(0.0, 1.0);
      return m;
    }
    case GateKind::CNOT: {
      ComplexMatrix m = ComplexMatrix::Zero(4, 4);
      m(0, 0) = 1.0;
      m(1, 1) = 1.0;
      m(2, 3) = 1.0;
      m(3, 2) = 1.0;
      return m;
    }
    case GateKind::CZ: {
      ComplexMatrix m = ComplexMatrix::Identity(4, 4);
      m(3, 3) = -1.0;
      return m;
    }
    case GateKind::TOFFOLI: {
      ComplexMatrix m = ComplexMatrix::Identity(8, 8);
      m(6, 6) = 0.0;
      m(7, 7) = 0.0;
      m(6, 7) = 1.0;
      m(7, 6) = 1.0;
      return m;
    }
  }
  throw std::logic_error("unknown gate kind");
}

std::vector<int> gate_qubits(const Gate& g) {
  std::vector<int> qs = g.controls;
  qs.insert(qs.end(), g.targets.begin(), g.targets.end());
  return qs;
}

void check_gate_arity(const Gate& g) {
  auto need = [&](std::size_t nc, std::size_t nt) {
    if (g.controls.size() != nc || g.targets.size() != nt)
      throw std::invalid_argument("gate " + gate_name(g.kind) + ": bad operand count");
  };
  switch (g.kind) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::Z:
    case GateKind::S:
      need(0, 1);
      break;
    case GateKind::CNOT:
    case GateKind::CZ:
      need(1, 1);
      break;
    case GateKind::TOFFOLI:
      need(2, 1);
      break;
  }
  std::vector<int> qs = gate_qubits(g);
  std::set<int> uniq(qs.begin(), qs.end());
  if (uniq.size() != qs.size())
    throw std::invalid_argument("gate " + gate_name(g.kind) + ": repeated qubit");
}

// rho <- (U x I) rho, qubit strides account for a trailing environment.
void left_apply(ComplexMatrix& m, int n_qubits, Index env, const std::vector<int>& qs,
                const ComplexMatrix& u) {
  const int k = static_cast<int>(qs.size());
  const Index dim_sub = Index(1) << k;
  const Index total = m.rows();
  std::vector<Index> stride(k);
  for (int j = 0; j < k; ++j) stride[j] = (Index(1) << (n_qubits - 1 - qs[j])) * env;

  std::vector<Index> offset(dim_sub);
  for (Index sidx = 0; sidx < dim_sub; ++sidx) {
    Index off = 0;
    for (int j = 0; j < k; ++j)
      if ((sidx >> (k - 1 - j)) & 1) off += stride[j];
    offset[sidx] = off;
  }
  Index qmask = 0;
  for (int j = 0; j < k; ++j) qmask |= stride[j];

  std::vector<std::complex<double>> buf(dim_sub);
  for (Index col = 0; col < total; ++col)
    for (Index base = 0; base < total; ++base) {
      if (base & qmask) continue;
      for (Index sidx = 0; sidx < dim_sub; ++sidx) buf[sidx] = m(base + offset[sidx], col);
      for (Index so = 0; so < dim_sub; ++so) {
        std::complex<double> acc = 0.0;
        for (Index si = 0; si < dim_sub; ++si) acc += u(so, si) * buf[si];
        m(base + offset[so], col) = acc;
      }
    }
}

// rho <- rho (U x I)^dag
void right_apply_dag(ComplexMatrix& m, int n_qubits, Index env, const std::vector<int>& qs,
                     const ComplexMatrix& u) {
  const int k = static_cast<int>(qs.size());
  const Index dim_sub = Index(1) << k;
  const Index total = m.cols();
  std::vector<Index> stride(k);
  for (int j = 0; j < k; ++j) stride[j] = (Index(1) << (n_qubits - 1 - qs[j])) * env;
  std::vector<Index> offset(dim_sub);
  for (Index sidx = 0; sidx < dim_sub; ++sidx) {
    Index off = 0;
    for (int j = 0; j < k; ++j)
      if ((sidx >> (k - 1 - j)) & 1) off += stride[j];
    offset[sidx] = off;
  }
  Index qmask = 0;
  for (int j = 0; j < k; ++j) qmask |= stride[j];

  std::vector<std::complex<double>> buf(dim_sub);
  for (Index row = 0; row < total; ++row)
    for (Index base = 0; base < total; ++base) {
      if (base & qmask) continue;
      for (Index sidx = 0; sidx < dim_sub; ++sidx) buf[sidx] = m(row, base + offset[sidx]);
      for (Index so = 0; so < dim_sub; ++so) {
        std::complex<double> acc = 0.0;
        for (Index si = 0; si < dim_sub; ++si) acc += buf[si] * std::conj(u(so, si));
        m(row, base + offset[so]) = acc;
      }
    }
}

void apply_gate_density(ComplexMatrix& rho, int n_qubits, Index env, const Gate& g) {
  ComplexMatrix u = gate_matrix(g);
  std::vector<int> qs = gate_qubits(g);
  left_apply(rho, n_qubits, env, qs, u);
  right_apply_dag(rho, n_qubits, env, qs, u);
}

void apply_gate_vector(ComplexVector& psi, int n_qubits, const Gate& g) {
  ComplexMatrix u = gate_matrix(g);
  std::vector<int> qs = gate_qubits(g);
  const int k = static_cast<int>(qs.size());
  const Index dim_sub = Index(1) << k;
  std::vector<Index> stride(k);
  for (int j = 0; j < k; ++j) stride[j] = Index(1) << (n_qubits - 1 - qs[j]);
  std::vector<Index> offset(dim_sub);
  for (Index sidx = 0; sidx < dim_sub; ++sidx) {
    Index off = 0;
    for (int j = 0; j < k; ++j)
      if ((sidx >> (k - 1 - j)) & 1) off += stride[j];
    offset[sidx] = off;
  }
  Index qmask = 0;
  for (int j = 0; j < k; ++j) qmask |= stride[j];

  std::vector<std::complex<double>> buf(dim_sub);
  for (Index base = 0; base < psi.size(); ++base) {
    if (base & qmask) continue;
    for (Index sidx = 0; sidx < dim_sub; ++sidx) buf[sidx] = psi[base + offset[sidx]];
    for (Index so = 0; so < dim_sub; ++so) {
      std::complex<double> acc = 0.0;
      for (Index si = 0; si < dim_sub; ++si) acc += u(so, si) * buf[si];
      psi[base + offset[so]] = acc;
    }
  }
}

// Zero every entry whose row and column disagree on the C register.
void dephase_c(ComplexMatrix& rho, int /*n_qubits*/, Index env, int c_bits) {
  if (c_bits == 0) return;
  Index cvals = Index(1) << c_bits;
  auto c_pattern = [&](Index idx) { return (idx / env) % cvals; };
  for (Index r = 0; r < rho.rows(); ++r)
    for (Index c = 0; c < rho.cols(); ++c)
      if (c_pattern(r) != c_pattern(c)) rho(r, c) = 0.0;
}

ComplexMatrix trace_out_c(const ComplexMatrix& rho, int n_qubits, Index env, int c_bits) {
  Index cvals = Index(1) << c_bits;
  Index out_dim = rho.rows() / cvals;
  Index rest = (Index(1) << (n_qubits - c_bits));
  ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
  for (Index i = 0; i < rest; ++i)
    for (Index j = 0; j < rest; ++j)
      for (Index e1 = 0; e1 < env; ++e1)
        for (Index e2 = 0; e2 < env; ++e2)
          for (Index cp = 0; cp < cvals; ++cp)
            out(i * env + e1, j * env + e2) +=
                rho((i * cvals + cp) * env + e1, (j * cvals + cp) * env + e2);
  return out;
}

void check_input_dims(const LoccCircuit& c, const BipartiteState& input) {
  if (input.dim_a() != (Index(1) << c.n_a()) || input.dim_b() != (Index(1) << c.n_b()))
    throw std::invalid_argument("apply_locc: input dims do not match n_a/n_b");
}

// Embed an (A : B) input with ancillas, key bits and C in |0> / |key>.
ComplexMatrix embed_input(const LoccCircuit& c, const ComplexMatrix& in, Index env,
                          std::uint32_t key_a, std::uint32_t key_b, int key_bits) {
  Index d_total = (Index(1) << c.total_qubits()) * env;
  if (d_total > kMaxDensityDim)
    throw std::invalid_argument("apply_locc: register space too large to simulate");
  Index da = Index(1) << c.n_a();
  Index db = Index(1) << c.n_b();

  auto anc_bits = [&](std::uint32_t key, int t_bits) {
    // Key occupies the leading ancilla qubits, big-endian.
    Index pattern = 0;
    for (int q = 0; q < key_bits; ++q) {
      int bit = (key >> (key_bits - 1 - q)) & 1;
      pattern |= Index(bit) << (t_bits - 1 - q);
    }
    return pattern;
  };
  Index ap = c.t_a() > 0 ? anc_bits(key_a, c.t_a()) : 0;
  Index bp = c.t_b() > 0 ? anc_bits(key_b, c.t_b()) : 0;

  auto global_index = [&](Index a, Index b, Index e) {
    Index idx = a;
    idx = (idx << c.t_a()) | ap;
    idx = (idx << c.n_b()) | b;
    idx = (idx << c.t_b()) | bp;
    idx = idx << c.c_bits();
    return idx * env + e;
  };

  ComplexMatrix rho = ComplexMatrix::Zero(d_total, d_total);
  for (Index a = 0; a < da; ++a)
    for (Index b = 0; b < db; ++b)
      for (Index a2 = 0; a2 < da; ++a2)
        for (Index b2 = 0; b2 < db; ++b2)
          for (Index e1 = 0; e1 < env; ++e1)
            for (Index e2 = 0; e2 < env; ++e2)
              rho(global_index(a, b, e1), global_index(a2, b2, e2)) =
                  in((a * db + b) * env + e1, (a2 * db + b2) * env + e2);
  return rho;
}

void run_rounds_density(const LoccCircuit& c, ComplexMatrix& rho, Index env) {
  int n = c.total_qubits();
  for (int r = 0; r < c.rounds(); ++r) {
    for (const Gate& g : c.a_rounds()[r]) apply_gate_density(rho, n, env, g);
    dephase_c(rho, n, env, c.c_bits());
    for (const Gate& g : c.b_rounds()[r]) apply_gate_density(rho, n, env, g);
    dephase_c(rho, n, env, c.c_bits());
  }
}

ComplexMatrix reduced_from_vector(const ComplexVector& psi, int n_qubits,
                                  const std::vector<int>& kept) {
  const int k = static_cast<int>(kept.size());
  const Index dk = Index(1) << k;
  std::vector<Index> kept_stride(k);
  for (int j = 0; j < k; ++j) kept_stride[j] = Index(1) << (n_qubits - 1 - kept[j]);
  Index kmask = 0;
  for (Index s : kept_stride) kmask |= s;

  std::vector<Index> offset(dk);
  for (Index sidx = 0; sidx < dk; ++sidx) {
    Index off = 0;
    for (int j = 0; j < k; ++j)
      if ((sidx >> (k - 1 - j)) & 1) off += kept_stride[j];
    offset[sidx] = off;
  }

  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Index rest = 0; rest < psi.size(); ++rest) {
    if (rest & kmask) continue;
    for (Index i = 0; i < dk; ++i) {
      std::complex<double> ai = psi[rest + offset[i]];
      if (ai == std::complex<double>(0.0, 0.0)) continue;
      for (Index j = 0; j < dk; ++j)
        out(i, j) += ai * std::conj(psi[rest + offset[j]]);
    }
  }
  return out;
}

std::string state_key(const ComplexMatrix& m) {
  std::string key;
  key.reserve(static_cast<std::size_t>(m.size()) * 2 * sizeof(long long));
  for (Index c = 0; c < m.cols(); ++c)
    for (Index r = 0; r < m.rows(); ++r) {
      long long re = std::llround(m(r, c).real() * 1e12);
      long long im = std::llround(m(r, c).imag() * 1e12);
      key.append(reinterpret_cast<const char*>(&re), sizeof re);
      key.append(reinterpret_cast<const char*>(&im), sizeof im);
    }
  return key;
}

}  // namespace

std::string gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::S: return "S";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::TOFFOLI: return "TOFFOLI";
  }
  return "?";
}

LoccCircuit::LoccCircuit(int n_a, int t_a, int n_b, int t_b, int c_bits,
                         std::vector<std::vector<Gate>> a_rounds,
                         std::vector<std::vector<Gate>> b_rounds, int gate_budget)
    : n_a_(n_a),
      t_a_(t_a),
      n_b_(n_b),
      t_b_(t_b),
      c_bits_(c_bits),
      a_rounds_(std::move(a_rounds)),
      b_rounds_(std::move(b_rounds)),
      gate_budget_(gate_budget) {
  if (n_a_ < 0 || t_a_ < 0 || n_b_ < 0 || t_b_ < 0 || c_bits_ < 0)
    throw std::invalid_argument("LoccCircuit: negative register size");
  if (a_rounds_.size() != b_rounds_.size())
    throw std::invalid_argument("LoccCircuit: round lists differ in length");

  std::set<int> allowed_a, allowed_b;
  for (int i = 0; i < n_a_; ++i) allowed_a.insert(a_qubit(i));
  for (int i = 0; i < t_a_; ++i) allowed_a.insert(ap_qubit(i));
  for (int i = 0; i < n_b_; ++i) allowed_b.insert(b_qubit(i));
  for (int i = 0; i < t_b_; ++i) allowed_b.insert(bp_qubit(i));
  for (int i = 0; i < c_bits_; ++i) {
    allowed_a.insert(c_qubit(i));
    allowed_b.insert(c_qubit(i));
  }

  auto check_side = [&](const std::vector<std::vector<Gate>>& rounds,
                        const std::set<int>& allowed, const char* side) {
    for (const auto& round : rounds)
      for (const Gate& g : round) {
        check_gate_arity(g);
        for (int q : gate_qubits(g))
          if (!allowed.count(q))
            throw std::invalid_argument(std::string("LoccCircuit: ") + side +
                                        "-side gate touches qubit " + std::to_string(q) +
                                        " outside its registers");
      }
  };
  check_side(a_rounds_, allowed_a, "A");
  check_side(b_rounds_, allowed_b, "B");

  if (gate_count() > gate_budget_)
    throw std::invalid_argument("LoccCircuit: gate budget exceeded");
}

int LoccCircuit::gate_count() const {
  int n = 0;
  for (const auto& r : a_rounds_) n += static_cast<int>(r.size());
  for (const auto& r : b_rounds_) n += static_cast<int>(r.size());
  return n;
}

BipartiteState apply_locc(const LoccCircuit& circuit, const BipartiteState& input) {
  check_input_dims(circuit, input);
  ComplexMatrix rho = embed_input(circuit, input.state().mat(), 1, 0, 0, 0);
  run_rounds_density(circuit, rho, 1);
  ComplexMatrix out = trace_out_c(rho, circuit.total_qubits(), 1, circuit.c_bits());
  return BipartiteState(DensityMatrix::trusted(std::move(out)), circuit.out_dim_a(),
                        circuit.out_dim_b());
}

ComplexMatrix apply_locc_with_env(const LoccCircuit& circuit, const ComplexMatrix& rho_in,
                                  Index env_dim) {
  ComplexMatrix rho = embed_input(circuit, rho_in, env_dim, 0, 0, 0);
  run_rounds_density(circuit, rho, env_dim);
  return trace_out_c(rho, circuit.total_qubits(), env_dim, circuit.c_bits());
}

BipartiteState apply_locc_branched(const LoccCircuit& circuit, const BipartiteState& input) {
  check_input_dims(circuit, input);
  int n = circuit.total_qubits();
  Index cvals = Index(1) << circuit.c_bits();

  struct Branch {
    double weight;
    ComplexMatrix rho;  // normalized
  };
  std::vector<Branch> branches;
  branches.push_back({1.0, embed_input(circuit, input.state().mat(), 1, 0, 0, 0)});

  auto measure = [&](std::vector<Branch>& in) {
    if (circuit.c_bits() == 0) return;
    std::vector<Branch> out;
    for (Branch& br : in) {
      for (Index cp = 0; cp < cvals; ++cp) {
        ComplexMatrix proj = br.rho;
        for (Index r = 0; r < proj.rows(); ++r)
          for (Index c = 0; c < proj.cols(); ++c)
            if (r % cvals != cp || c % cvals != cp) proj(r, c) = 0.0;
        double p = proj.trace().real();
        if (p * br.weight < kBranchPrune) continue;
        proj /= p;
        out.push_back({br.weight * p, std::move(proj)});
      }
    }
    in = std::move(out);
  };

  for (int r = 0; r < circuit.rounds(); ++r) {
    for (Branch& br : branches)
      for (const Gate& g : circuit.a_rounds()[r]) apply_gate_density(br.rho, n, 1, g);
    measure(branches);
    for (Branch& br : branches)
      for (const Gate& g : circuit.b_rounds()[r]) apply_gate_density(br.rho, n, 1, g);
    measure(branches);
  }

  Index d_total = Index(1) << n;
  ComplexMatrix acc = ComplexMatrix::Zero(d_total, d_total);
  for (const Branch& br : branches) acc += br.weight * br.rho;
  ComplexMatrix out = trace_out_c(acc, n, 1, circuit.c_bits());
  return BipartiteState(DensityMatrix::trusted(std::move(out)), circuit.out_dim_a(),
                        circuit.out_dim_b());
}

ComplexMatrix locc_choi_matrix(const LoccCircuit& circuit) {
  if (circuit.n_a() != 1 || circuit.n_b() != 1)
    throw std::invalid_argument("locc_choi_matrix: implemented for n_a = n_b = 1");
  Index d_in = 4;
  ComplexVector omega = ComplexVector::Zero(d_in * d_in);
  for (Index i = 0; i < d_in; ++i) omega[i * d_in + i] = 0.5;
  ComplexMatrix rho_in = omega * omega.adjoint();
  return apply_locc_with_env(circuit, rho_in, d_in);
}

KeyedLoccMap::KeyedLoccMap(LoccCircuit circuit, int key_bits_count)
    : base(std::move(circuit)), key_bits(key_bits_count) {
  if (key_bits < 0 || key_bits > base.t_a() || key_bits > base.t_b())
    throw std::invalid_argument("KeyedLoccMap: key register does not fit the ancillas");
}

BipartiteState apply_keyed_locc(const KeyedLoccMap& map, std::uint32_t key,
                                const BipartiteState& input) {
  check_input_dims(map.base, input);
  ComplexMatrix rho = embed_input(map.base, input.state().mat(), 1, key, key, map.key_bits);
  run_rounds_density(map.base, rho, 1);
  ComplexMatrix out = trace_out_c(rho, map.base.total_qubits(), 1, map.base.c_bits());
  return BipartiteState(DensityMatrix::trusted(std::move(out)), map.base.out_dim_a(),
                        map.base.out_dim_b());
}

namespace {

// Pure-state fast path for keyed circuits without communication.
ComplexMatrix keyed_output_reduced(const KeyedLoccMap& map, std::uint32_t key,
                                   const ComplexVector& input_vec,
                                   const std::vector<int>& kept_out) {
  const LoccCircuit& c = map.base;
  int n = c.total_qubits();
  Index d_total = Index(1) << n;
  if (d_total > kMaxVectorDim)
    throw std::invalid_argument("keyed circuit: register space too large");

  auto anc_bits = [&](int t_bits) {
    Index pattern = 0;
    for (int q = 0; q < map.key_bits; ++q) {
      int bit = (key >> (map.key_bits - 1 - q)) & 1;
      pattern |= Index(bit) << (t_bits - 1 - q);
    }
    return pattern;
  };
  Index ap = c.t_a() > 0 ? anc_bits(c.t_a()) : 0;
  Index bp = c.t_b() > 0 ? anc_bits(c.t_b()) : 0;

  Index da = Index(1) << c.n_a();
  Index db = Index(1) << c.n_b();
  ComplexVector psi = ComplexVector::Zero(d_total);
  for (Index a = 0; a < da; ++a)
    for (Index b = 0; b < db; ++b) {
      Index idx = a;
      idx = (idx << c.t_a()) | ap;
      idx = (idx << c.n_b()) | b;
      idx = (idx << c.t_b()) | bp;
      idx = idx << c.c_bits();
      psi[idx] = input_vec[a * db + b];
    }

  for (int r = 0; r < c.rounds(); ++r) {
    for (const Gate& g : c.a_rounds()[r]) apply_gate_vector(psi, n, g);
    for (const Gate& g : c.b_rounds()[r]) apply_gate_vector(psi, n, g);
  }
  return reduced_from_vector(psi, n, kept_out);
}

std::optional<ComplexVector> pure_vector_of(const DensityMatrix& s) {
  if (s.purity() < 1.0 - 1e-9) return std::nullopt;
  EigSystem es = eig_hermitian(s.mat());
  return ComplexVector(es.vectors.col(es.values.size() - 1));
}

std::vector<int> designated_global_qubits(const LoccCircuit& c,
                                          const std::vector<std::pair<int, int>>& pairs) {
  std::vector<int> kept;
  for (const auto& [aq, bq] : pairs) {
    if (aq < 0 || aq >= c.n_a() + c.t_a() || bq < 0 || bq >= c.n_b() + c.t_b())
      throw std::invalid_argument("output pair designation outside the output registers");
    kept.push_back(aq);
  }
  for (const auto& [aq, bq] : pairs) kept.push_back(c.n_a() + c.t_a() + bq);
  for (std::size_t i = 1; i < pairs.size(); ++i)
    if (pairs[i].first <= pairs[i - 1].first || pairs[i].second <= pairs[i - 1].second)
      throw std::invalid_argument("output pairs must ascend on both sides");
  return kept;
}

double bell_power_fidelity(const ComplexMatrix& reduced, int m) {
  ComplexVector target = bell_power_vector(m);
  double f = (target.adjoint() * reduced * target)(0, 0).real();
  return std::clamp(f, 0.0, 1.0);
}

}  // namespace

CertificateOutcome distillation_deficit(DistillationCertificate& cert) {
  if (cert.keyed_circuit.has_value() == cert.plain_circuit.has_value())
    throw std::invalid_argument("certificate needs exactly one circuit");
  const LoccCircuit& c =
      cert.keyed_circuit ? cert.keyed_circuit->base : *cert.plain_circuit;

  if (cert.output_pairs.empty())
    for (int i = 0; i < cert.target_m; ++i) cert.output_pairs.push_back({i, i});
  if (static_cast<int>(cert.output_pairs.size()) != cert.target_m)
    throw std::invalid_argument("output pair designation inconsistent with target_m");
  std::vector<int> kept = designated_global_qubits(c, cert.output_pairs);

  cert.per_key_deficit.clear();
  double max_deficit = 0.0;
  for (std::size_t i = 0; i < cert.family.size(); ++i) {
    const DensityMatrix& state = cert.family.states[i];
    std::uint32_t key = cert.family.keys[i];
    ComplexMatrix reduced;
    std::optional<ComplexVector> vec;
    if (cert.keyed_circuit && c.c_bits() == 0 && (vec = pure_vector_of(state))) {
      reduced = keyed_output_reduced(*cert.keyed_circuit, key, *vec, kept);
    } else {
      BipartiteState out =
          cert.keyed_circuit
              ? apply_keyed_locc(*cert.keyed_circuit, key,
                                 BipartiteState(state, Index(1) << c.n_a(),
                                                Index(1) << c.n_b()))
              : apply_locc(*cert.plain_circuit,
                           BipartiteState(state, Index(1) << c.n_a(),
                                          Index(1) << c.n_b()));
      std::vector<Index> dims(c.n_a() + c.t_a() + c.n_b() + c.t_b(), 2);
      std::vector<bool> keep(dims.size(), false);
      for (int q : kept) keep[q] = true;
      reduced = partial_trace_multi(out.state().mat(), dims, keep);
    }
    double deficit = 1.0 - bell_power_fidelity(reduced, cert.target_m);
    cert.per_key_deficit.push_back(deficit);
    max_deficit = std::max(max_deficit, deficit);
  }
  return {max_deficit, max_deficit <= cert.eps + 1e-12};
}

CertificateOutcome cost_deficit(const KeyedEnsemble& family, const KeyedLoccMap& circuit,
                                int n_in, double eps, std::vector<double>* per_key) {
  const LoccCircuit& c = circuit.base;
  if (n_in > c.n_a() || n_in > c.n_b())
    throw std::invalid_argument("cost_deficit: n_in exceeds the input registers");

  // Input: n_in Bell pairs between A_i and B_i, remaining qubits |0>.
  Index da = Index(1) << c.n_a();
  Index db = Index(1) << c.n_b();
  ComplexVector input = ComplexVector::Zero(da * db);
  double amp = std::pow(2.0, -0.5 * n_in);
  for (Index x = 0; x < (Index(1) << n_in); ++x) {
    Index a = 0, b = 0;
    for (int i = 0; i < n_in; ++i) {
      Index bit = (x >> (n_in - 1 - i)) & 1;
      a |= bit << (c.n_a() - 1 - i);
      b |= bit << (c.n_b() - 1 - i);
    }
    input[a * db + b] = amp;
  }

  int ka = 0, kb = 0;
  while ((Index(1) << ka) < family.dim_a) ++ka;
  while ((Index(1) << kb) < family.dim_b) ++kb;
  if ((Index(1) << ka) != family.dim_a || (Index(1) << kb) != family.dim_b)
    throw std::invalid_argument("cost_deficit: family dims must be powers of two");
  std::vector<int> kept;
  for (int i = 0; i < ka; ++i) kept.push_back(i);
  for (int i = 0; i < kb; ++i) kept.push_back(c.n_a() + c.t_a() + i);

  if (per_key) per_key->clear();
  double max_deficit = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    std::uint32_t key = family.keys[i];
    ComplexMatrix reduced;
    if (c.c_bits() == 0) {
      reduced = keyed_output_reduced(circuit, key, input, kept);
    } else {
      BipartiteState out = apply_keyed_locc(
          circuit, key,
          BipartiteState(DensityMatrix::trusted(input * input.adjoint()), da, db));
      std::vector<Index> dims(c.n_a() + c.t_a() + c.n_b() + c.t_b(), 2);
      std::vector<bool> keep(dims.size(), false);
      for (int q : kept) keep[q] = true;
      reduced = partial_trace_multi(out.state().mat(), dims, keep);
    }
    double f = fidelity(family.states[i], DensityMatrix::trusted(std::move(reduced)));
    double deficit = 1.0 - f;
    if (per_key) per_key->push_back(deficit);
    max_deficit = std::max(max_deficit, deficit);
  }
  return {max_deficit, max_deficit <= eps + 1e-12};
}

ComplexVector bell_vector() {
  ComplexVector v = ComplexVector::Zero(4);
  v[0] = v[3] = 1.0 / std::sqrt(2.0);
  return v;
}

ComplexVector bell_power_vector(int m) {
  Index half = Index(1) << m;
  ComplexVector v = ComplexVector::Zero(half * half);
  double amp = std::pow(2.0, -0.5 * m);
  for (Index x = 0; x < half; ++x) v[x * half + x] = amp;
  return v;
}

namespace {

// Alphabet of single gates available to one side of the toy family.
std::vector<Gate> side_alphabet(const std::vector<int>& qubits) {
  std::vector<Gate> out;
  for (int q : qubits)
    for (GateKind k : {GateKind::H, GateKind::X, GateKind::Z, GateKind::S})
      out.push_back({k, {}, {q}});
  for (int q1 : qubits)
    for (int q2 : qubits) {
      if (q1 == q2) continue;
      out.push_back({GateKind::CNOT, {q1}, {q2}});
      if (q1 < q2) out.push_back({GateKind::CZ, {q1}, {q2}});
    }
  if (qubits.size() >= 3)
    for (int t : qubits) {
      std::vector<int> cs;
      for (int q : qubits)
        if (q != t) cs.push_back(q);
      if (cs.size() >= 2) out.push_back({GateKind::TOFFOLI, {cs[0], cs[1]}, {t}});
    }
  return out;
}

}  // namespace

LockedDemoReport locked_entanglement_demo(int n_pairs) {
  if (n_pairs < 1 || n_pairs > 2)
    throw std::invalid_argument("locked_entanglement_demo: n_pairs must be 1 or 2");
  const int n = n_pairs;
  const int key_bits = 2 * n;
  const int num_keys = 1 << key_bits;
  Index half = Index(1) << n;
  Index dim = half * half;

  LockedDemoReport rep;
  rep.n_pairs = n;
  rep.num_keys = num_keys;

  // Family psi_k = (P_k x I) Phi^{x n} (P_k x I)^dag over all Pauli keys.
  ComplexVector base = bell_power_vector(n);
  std::vector<DensityMatrix> states;
  std::vector<ComplexVector> state_vecs;
  for (int key = 0; key < num_keys; ++key) {
    ComplexVector v = base;
    std::vector<Index> qdims(2 * n, 2);
    for (int i = 0; i < n; ++i) {
      int x_bit = (key >> (key_bits - 1 - 2 * i)) & 1;
      int z_bit = (key >> (key_bits - 1 - (2 * i + 1))) & 1;
      ComplexMatrix u = ComplexMatrix::Identity(2, 2);
      if (x_bit) u = gate_matrix({GateKind::X, {}, {0}}) * u;
      if (z_bit) u = gate_matrix({GateKind::Z, {}, {0}}) * u;
      v = apply_on_factor(v, qdims, i, u);
    }
    state_vecs.push_back(v);
    states.push_back(PureState(v).projector());
  }
  KeyedEnsemble family(key_bits, [&] {
    std::vector<std::uint32_t> ks(num_keys);
    for (int k = 0; k < num_keys; ++k) ks[k] = k;
    return ks;
  }(), states, half, half);

  // (i) With-key distillation: controlled Pauli inversion from the key register.
  {
    std::vector<Gate> a_gates;
    LoccCircuit proto(n, key_bits, n, key_bits, 0, {{}}, {{}});
    for (int i = 0; i < n; ++i) {
      a_gates.push_back({GateKind::CNOT, {proto.ap_qubit(2 * i)}, {proto.a_qubit(i)}});
      a_gates.push_back({GateKind::CZ, {proto.ap_qubit(2 * i + 1)}, {proto.a_qubit(i)}});
    }
    LoccCircuit correction(n, key_bits, n, key_bits, 0, {a_gates}, {{}});
    DistillationCertificate cert{family, KeyedLoccMap(correction, key_bits), std::nullopt,
                                 n, 0.0, {}, {}};
    CertificateOutcome out = distillation_deficit(cert);
    rep.with_key_max_deficit = out.max_deficit;
  }

  // (ii) Key average is maximally mixed, hence separable (PPT witnessed).
  ComplexMatrix avg = ComplexMatrix::Zero(dim, dim);
  for (const DensityMatrix& s : states) avg += s.mat();
  avg /= static_cast<double>(num_keys);
  ComplexMatrix ref = ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim);
  rep.key_avg_max_dev = max_abs_entry(avg - ref);
  {
    ComplexMatrix pt = partial_transpose_b(avg, half, half);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> s(0.5 * (pt + pt.adjoint()),
                                                   Eigen::EigenvaluesOnly);
    rep.key_avg_ppt_min_eig = s.eigenvalues().minCoeff();
  }

  // (iii) Statistical distinguishing advantage against the reference family.
  rep.hiding_advantage = trace_distance(DensityMatrix::trusted(avg),
                                        DensityMatrix::trusted(ref));

  // Reference family preparation at zero Bell cost: local purifications of
  // the maximally mixed state.
  {
    LoccCircuit proto(n, n, n, n, 0, {{}}, {{}});
    std::vector<Gate> a_gates, b_gates;
    for (int i = 0; i < n; ++i) {
      a_gates.push_back({GateKind::H, {}, {proto.ap_qubit(i)}});
      a_gates.push_back({GateKind::CNOT, {proto.ap_qubit(i)}, {proto.a_qubit(i)}});
      b_gates.push_back({GateKind::H, {}, {proto.bp_qubit(i)}});
      b_gates.push_back({GateKind::CNOT, {proto.bp_qubit(i)}, {proto.b_qubit(i)}});
    }
    LoccCircuit prep(n, n, n, n, 0, {a_gates}, {b_gates});
    std::vector<DensityMatrix> ref_states(num_keys, DensityMatrix::trusted(ref));
    KeyedEnsemble ref_family(key_bits, family.keys, ref_states, half, half);
    CertificateOutcome out = cost_deficit(ref_family, KeyedLoccMap(prep, 0), 0, 0.0);
    rep.reference_cost_deficit = out.max_deficit;
  }

  // (iv) Exhaustive no-key toy circuits on the key-averaged input.
  {
    const int max_gates = 6;
    const int nq = 2 * n + 1;  // A qubits, B qubits, one C qubit
    std::vector<int> a_qubits, b_qubits;
    for (int i = 0; i < n; ++i) a_qubits.push_back(i);
    a_qubits.push_back(2 * n);
    for (int i = 0; i < n; ++i) b_qubits.push_back(n + i);
    b_qubits.push_back(2 * n);
    std::vector<Gate> alpha_a = side_alphabet(a_qubits);
    std::vector<Gate> alpha_b = side_alphabet(b_qubits);

    // Raw circuit count of the declared family.
    {
      long long total = 0;
      auto powll = [](long long b, int e) {
        long long r = 1;
        for (int i = 0; i < e; ++i) r *= b;
        return r;
      };
      for (int la = 0; la <= max_gates; ++la)
        for (int lb = 0; lb + la <= max_gates; ++lb)
          total += powll(static_cast<long long>(alpha_a.size()), la) *
                   powll(static_cast<long long>(alpha_b.size()), lb);
      rep.nokey_circuits = total;
    }

    Index d_total = Index(1) << nq;
    ComplexMatrix rho0 = ComplexMatrix::Zero(d_total, d_total);
    // I/4^n on (A,B), C in |0>: nonzero only where C bit = 0.
    for (Index i = 0; i < (d_total >> 1); ++i) rho0(i << 1, i << 1) = 1.0 / double(dim);

    // Figure of merit: overlap with Phi^{x n} on the designated pairs,
    // identity elsewhere; measuring C then discarding equals discarding.
    ComplexVector phi = bell_power_vector(n);
    ComplexMatrix w = ComplexMatrix::Zero(d_total, d_total);
    {
      std::vector<int> kept;
      for (int i = 0; i < n; ++i) kept.push_back(i);
      for (int i = 0; i < n; ++i) kept.push_back(n + i);
      // Embed |phi><phi| on kept qubits (they are the leading 2n qubits).
      ComplexMatrix proj = phi * phi.adjoint();
      for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j)
          for (Index c = 0; c < 2; ++c) w(i * 2 + c, j * 2 + c) = proj(i, j);
    }
    auto fid_of = [&](const ComplexMatrix& rho) {
      double f = (rho * w).trace().real();
      return std::clamp(f, 0.0, 1.0);
    };

    double best = 0.0;
    long long distinct = 0;
    std::unordered_set<std::string> seen_a;
    std::unordered_map<std::string, int> b_done;  // dephased state -> depth done

    // B-side BFS with per-level dedup, evaluating every node.
    auto run_b = [&](const ComplexMatrix& start, int budget) {
      std::vector<ComplexMatrix> level{start};
      std::unordered_set<std::string> seen;
      seen.insert(state_key(start));
      best = std::max(best, fid_of(start));
      for (int depth = 0; depth < budget; ++depth) {
        std::vector<ComplexMatrix> next;
        for (const ComplexMatrix& s : level)
          for (const Gate& g : alpha_b) {
            ComplexMatrix t = s;
            apply_gate_density(t, nq, 1, g);
            std::string key = state_key(t);
            if (!seen.insert(std::move(key)).second) continue;
            ++distinct;
            best = std::max(best, fid_of(t));
            next.push_back(std::move(t));
          }
        level = std::move(next);
        if (level.empty()) break;
      }
    };

    std::vector<ComplexMatrix> level{rho0};
    seen_a.insert(state_key(rho0));
    for (int la = 0; la <= max_gates; ++la) {
      for (const ComplexMatrix& s : level) {
        ComplexMatrix deph = s;
        dephase_c(deph, nq, 1, 1);
        std::string key = state_key(deph);
        int budget = max_gates - la;
        auto it = b_done.find(key);
        if (it == b_done.end() || it->second < budget) {
          b_done[key] = budget;
          run_b(deph, budget);
        }
      }
      if (la == max_gates) break;
      std::vector<ComplexMatrix> next;
      for (const ComplexMatrix& s : level)
        for (const Gate& g : alpha_a) {
          ComplexMatrix t = s;
          apply_gate_density(t, nq, 1, g);
          std::string key = state_key(t);
          if (!seen_a.insert(std::move(key)).second) continue;
          ++distinct;
          next.push_back(std::move(t));
        }
      level = std::move(next);
      if (level.empty()) break;
    }

    rep.nokey_best_fidelity = best;
    rep.nokey_bound = std::pow(0.5, n);
    rep.nokey_distinct_states = distinct;
    rep.scope_note =
        "no-key search is exhaustive over the declared finite family: one-round "
        "circuits of at most " +
        std::to_string(max_gates) +
        " gates, each side acting on its qubits plus the shared C qubit; "
        "distinguishing advantages are statistical surrogates for computational "
        "indistinguishability";
  }

  return rep;
}

LoccCircuit random_locc_circuit(Rng& rng, int n_a, int t_a, int n_b, int t_b, int c_bits,
                                int rounds, int gates_per_side) {
  LoccCircuit proto(n_a, t_a, n_b, t_b, c_bits, {{}}, {{}});
  std::vector<int> qa, qb;
  for (int i = 0; i < n_a; ++i) qa.push_back(proto.a_qubit(i));
  for (int i = 0; i < t_a; ++i) qa.push_back(proto.ap_qubit(i));
  for (int i = 0; i < n_b; ++i) qb.push_back(proto.b_qubit(i));
  for (int i = 0; i < t_b; ++i) qb.push_back(proto.bp_qubit(i));
  for (int i = 0; i < c_bits; ++i) {
    qa.push_back(proto.c_qubit(i));
    qb.push_back(proto.c_qubit(i));
  }
  std::vector<Gate> alpha_a = side_alphabet(qa);
  std::vector<Gate> alpha_b = side_alphabet(qb);

  std::vector<std::vector<Gate>> a_rounds, b_rounds;
  for (int r = 0; r < rounds; ++r) {
    std::vector<Gate> ga, gb;
    for (int i = 0; i < gates_per_side; ++i) {
      ga.push_back(alpha_a[rng.uniform_index(alpha_a.size())]);
      gb.push_back(alpha_b[rng.uniform_index(alpha_b.size())]);
    }
    a_rounds.push_back(std::move(ga));
    b_rounds.push_back(std::move(gb));
  }
  return LoccCircuit(n_a, t_a, n_b, t_b, c_bits, std::move(a_rounds), std::move(b_rounds),
                     std::max(64, 2 * rounds * gates_per_side));
}

}  // namespace qrlab
