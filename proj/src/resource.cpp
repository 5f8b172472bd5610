#include "qrlab/resource.hpp"

#include "qrlab/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace qrlab {

namespace {

constexpr double kLn2 = std::numbers::ln2;
// Floor for log evaluation during optimization; keeps line searches finite.
constexpr double kLogFloor = 1e-100;
// Eigenvalue floor for divided-difference gradients.
constexpr double kGradFloor = 1e-14;

double entropy_of_diagonal(const DensityMatrix& rho) {
  RealVector probs = rho.mat().diagonal().real().cwiseMax(0.0);
  return shannon_entropy_bits(probs);
}

// Tr[rho log2 rho] over the support.
double tr_rho_log_rho(const DensityMatrix& rho) {
  EigSystem es = eig_hermitian(rho.mat());
  double acc = 0.0;
  for (Index i = 0; i < es.values.size(); ++i)
    if (es.values[i] > kSupportTol) acc += es.values[i] * std::log2(es.values[i]);
  return acc;
}

// Objective f(sigma) = Tr[rho log2 rho] - Tr[rho log2 sigma], evaluated from
// sigma's eigensystem with a floor so that rank-deficient iterates stay
// finite for line-search comparisons.
double objective_from_eigs(const ComplexMatrix& rho_mat, double rho_term,
                           const EigSystem& es) {
  double cross = 0.0;
  for (Index j = 0; j < es.values.size(); ++j) {
    double q = std::max(es.values[j], kLogFloor);
    double overlap =
        std::max((es.vectors.col(j).adjoint() * rho_mat * es.vectors.col(j))(0, 0).real(),
                 0.0);
    cross += overlap * std::log2(q);
  }
  return rho_term - cross;
}

double objective(const ComplexMatrix& rho_mat, double rho_term, const ComplexMatrix& sigma) {
  return objective_from_eigs(rho_mat, rho_term, eig_hermitian(sigma));
}

// Gradient of f at sigma in bits: -(1/ln2) * DaleckiiKrein_log(sigma)[rho].
ComplexMatrix objective_gradient(const ComplexMatrix& rho_mat, const EigSystem& es) {
  Index d = es.values.size();
  ComplexMatrix rho_tilde = es.vectors.adjoint() * rho_mat * es.vectors;
  ComplexMatrix phi(d, d);
  for (Index i = 0; i < d; ++i) {
    double a = std::max(es.values[i], kGradFloor);
    for (Index j = 0; j < d; ++j) {
      double b = std::max(es.values[j], kGradFloor);
      double v = (std::abs(a - b) > 1e-12 * std::max(a, b))
                     ? (std::log(a) - std::log(b)) / (a - b)
                     : 1.0 / (0.5 * (a + b));
      phi(i, j) = v;
    }
  }
  ComplexMatrix core = rho_tilde.cwiseProduct(phi);
  ComplexMatrix g = -(es.vectors * core * es.vectors.adjoint()) / kLn2;
  return 0.5 * (g + g.adjoint());
}

ComplexMatrix psd_part(const ComplexMatrix& m) {
  EigSystem es = eig_hermitian(m);
  RealVector clamped = es.values.cwiseMax(0.0);
  return es.vectors * clamped.asDiagonal() * es.vectors.adjoint();
}

// Euclidean projection of a real vector onto the probability simplex.
RealVector simplex_project(const RealVector& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  RealVector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
  return out;
}

// Projection onto {sigma >= 0, Tr sigma = 1}.
ComplexMatrix project_density_set(const ComplexMatrix& m) {
  EigSystem es = eig_hermitian(m);
  RealVector probs = simplex_project(es.values);
  return es.vectors * probs.asDiagonal() * es.vectors.adjoint();
}

// Projection onto the PPT cone {sigma : sigma^{T_B} >= 0}.
ComplexMatrix project_ppt_cone(const ComplexMatrix& m, Index da, Index db) {
  return partial_transpose_b(psd_part(partial_transpose_b(m, da, db)), da, db);
}

// Dykstra alternating projections onto (density set) intersect (PPT cone).
ComplexMatrix dykstra_project(const ComplexMatrix& m, Index da, Index db, int iters) {
  ComplexMatrix x = 0.5 * (m + m.adjoint());
  ComplexMatrix p = ComplexMatrix::Zero(x.rows(), x.cols());
  ComplexMatrix q = ComplexMatrix::Zero(x.rows(), x.cols());
  for (int it = 0; it < iters; ++it) {
    ComplexMatrix y = project_density_set(x + p);
    p = x + p - y;
    x = project_ppt_cone(y + q, da, db);
    q = y + q - x;
  }
  // Final pass through the density set so trace is exact.
  return project_density_set(x);
}

// Certified lower bound on min_{tau PPT, Tr tau = 1} <G, tau> via the dual
// max lambda s.t. G - lambda I - Q^{T_B} >= 0, Q >= 0. Any feasible (lambda,
// Q) certifies. Two closed-form candidates plus supergradient refinement.
double lmo_ppt_lower(const ComplexMatrix& g, Index da, Index db, double target,
                     int iters) {
  auto lambda_min = [](const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> s(0.5 * (m + m.adjoint()),
                                                   Eigen::EigenvaluesOnly);
    return s.eigenvalues().minCoeff();
  };
  Index d = g.rows();
  double best = lambda_min(g);  // Q = 0
  double lam_tb = lambda_min(partial_transpose_b(g, da, db));
  best = std::max(best, lam_tb);  // Q = (G - lambda I)^{T_B}

  // Supergradient ascent on h(Q) = lambda_min(G - Q^{T_B}), Q >= 0.
  ComplexMatrix q = partial_transpose_b(
      g - lam_tb * ComplexMatrix::Identity(d, d), da, db);
  q = psd_part(q);
  int since_improve = 0;
  for (int it = 0; it < iters; ++it) {
    ComplexMatrix m = g - partial_transpose_b(q, da, db);
    EigSystem es = eig_hermitian(m);
    double h = es.values[0];
    if (h > best + 1e-12) {
      best = h;
      since_improve = 0;
    } else if (++since_improve >= 40) {
      break;
    }
    if (h >= target - 1e-12) break;
    ComplexVector v = es.vectors.col(0);
    ComplexMatrix step = -partial_transpose_b(
        ComplexMatrix(v * v.adjoint()), da, db);
    // Polyak-style step toward the target, damped over time.
    double alpha = std::min(target - h, 1.0 + std::abs(h)) /
                   (1.0 + 0.02 * static_cast<double>(it));
    q = psd_part(q + alpha * step);
  }
  return best;
}

struct ProductAtom {
  ComplexVector a;
  ComplexVector b;
  double weight = 0.0;
};

ComplexVector product_vector(const ProductAtom& atom) {
  return tensor_product(atom.a, atom.b);
}

// Minimize <a b| G |a b> over product unit vectors by alternating
// eigenvector updates.
std::pair<ComplexVector, ComplexVector> min_product_direction(
    const ComplexMatrix& g, Index da, Index db, Rng& rng, int restarts,
    int alternations, double tol) {
  double best_val = std::numeric_limits<double>::infinity();
  ComplexVector best_a, best_b;
  for (int r = 0; r < restarts; ++r) {
    ComplexVector a = random_pure_vector(rng, da);
    ComplexVector b = random_pure_vector(rng, db);
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < alternations; ++it) {
      // Contract B side: M_a[i,i'] = <i b| G |i' b>.
      ComplexMatrix ma = ComplexMatrix::Zero(da, da);
      for (Index i = 0; i < da; ++i)
        for (Index i2 = 0; i2 < da; ++i2) {
          std::complex<double> acc = 0.0;
          for (Index j = 0; j < db; ++j)
            for (Index j2 = 0; j2 < db; ++j2)
              acc += std::conj(b[j]) * g(i * db + j, i2 * db + j2) * b[j2];
          ma(i, i2) = acc;
        }
      a = eig_hermitian(ma).vectors.col(0);
      ComplexMatrix mb = ComplexMatrix::Zero(db, db);
      for (Index j = 0; j < db; ++j)
        for (Index j2 = 0; j2 < db; ++j2) {
          std::complex<double> acc = 0.0;
          for (Index i = 0; i < da; ++i)
            for (Index i2 = 0; i2 < da; ++i2)
              acc += std::conj(a[i]) * g(i * db + j, i2 * db + j2) * a[i2];
          mb(j, j2) = acc;
        }
      EigSystem esb = eig_hermitian(mb);
      b = esb.vectors.col(0);
      double val = esb.values[0];
      if (prev - val < tol) break;
      prev = val;
    }
    ComplexVector ab = tensor_product(a, b);
    double val = (ab.adjoint() * g * ab)(0, 0).real();
    if (val < best_val) {
      best_val = val;
      best_a = a;
      best_b = b;
    }
  }
  return {best_a, best_b};
}

// Golden-section search for a convex scalar function on [0, 1].
double golden_min(const std::function<double(double)>& fn, int iters, double* arg_out) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = fn(x1), f2 = fn(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = fn(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = fn(x2);
    }
  }
  double xs[] = {0.0, lo, x1, x2, hi, 1.0};
  double best_x = 0.0, best_f = fn(0.0);
  for (double x : xs) {
    double f = fn(x);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
  if (arg_out) *arg_out = best_x;
  return best_f;
}

struct SeesawResult {
  double upper;
  ComplexMatrix sigma;
  std::vector<ProductAtom> atoms;
  bool converged;
};

// Conditional-gradient see-saw over mixtures of product states. Every
// iterate is an explicit separable mixture, so the objective value is a
// certified upper bound on the relative entropy of entanglement.
SeesawResult seesaw_upper(const ComplexMatrix& rho_mat, double rho_term, Index da,
                          Index db, const SeparabilityOptions& opts, Rng& rng) {
  Index d = da * db;
  int max_atoms = static_cast<int>(d * d);
  if (opts.seesaw_max_atoms > 0) max_atoms = std::min(max_atoms, opts.seesaw_max_atoms);

  // Start from the maximally mixed state as a uniform product-basis mixture.
  std::vector<ProductAtom> atoms;
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < db; ++j) {
      ProductAtom atom;
      atom.a = ComplexVector::Zero(da);
      atom.a[i] = 1.0;
      atom.b = ComplexVector::Zero(db);
      atom.b[j] = 1.0;
      atom.weight = 1.0 / static_cast<double>(d);
      atoms.push_back(std::move(atom));
    }
  ComplexMatrix sigma = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
  double f_cur = objective(rho_mat, rho_term, sigma);
  bool converged = false;

  auto reweight = [&](int sweeps) {
    for (int s = 0; s < sweeps; ++s) {
      EigSystem es = eig_hermitian(sigma);
      ComplexMatrix g = objective_gradient(rho_mat, es);
      int best_i = 0;
      double best_lin = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < atoms.size(); ++i) {
        ComplexVector ab = product_vector(atoms[i]);
        double lin = (ab.adjoint() * g * ab)(0, 0).real();
        if (lin < best_lin) {
          best_lin = lin;
          best_i = static_cast<int>(i);
        }
      }
      ComplexVector ab = product_vector(atoms[best_i]);
      ComplexMatrix pi = ab * ab.adjoint();
      double gamma = 0.0;
      double f_new = golden_min(
          [&](double t) {
            return objective(rho_mat, rho_term, (1.0 - t) * sigma + t * pi);
          },
          opts.line_search_iters, &gamma);
      if (f_cur - f_new < opts.seesaw_tol) break;
      sigma = (1.0 - gamma) * sigma + gamma * pi;
      for (auto& atom : atoms) atom.weight *= (1.0 - gamma);
      atoms[best_i].weight += gamma;
      f_cur = f_new;
    }
  };

  int slow_steps = 0;
  for (int atom_iter = 0; atom_iter < max_atoms; ++atom_iter) {
    EigSystem es = eig_hermitian(sigma);
    ComplexMatrix g = objective_gradient(rho_mat, es);
    int restarts = (atom_iter == 0) ? opts.seesaw_restarts : 2;
    auto [a, b] = min_product_direction(g, da, db, rng, restarts,
                                        opts.seesaw_alternations, 1e-12);
    ComplexVector ab = tensor_product(a, b);
    ComplexMatrix pi = ab * ab.adjoint();
    double gamma = 0.0;
    double f_new = golden_min(
        [&](double t) {
          return objective(rho_mat, rho_term, (1.0 - t) * sigma + t * pi);
        },
        opts.line_search_iters, &gamma);
    if (f_cur - f_new < opts.seesaw_tol) {
      converged = true;
      break;
    }
    slow_steps = (f_cur - f_new < 10.0 * opts.seesaw_tol) ? slow_steps + 1 : 0;
    sigma = (1.0 - gamma) * sigma + gamma * pi;
    for (auto& atom : atoms) atom.weight *= (1.0 - gamma);
    ProductAtom atom{a, b, gamma};
    atoms.push_back(std::move(atom));
    f_cur = f_new;
    if (slow_steps >= 5) {
      converged = true;
      break;
    }
    if (atom_iter % 5 == 4) reweight(10);
  }
  reweight(20);
  f_cur = objective(rho_mat, rho_term, sigma);
  return {f_cur, sigma, atoms, converged};
}

struct PgdResult {
  double lower;
  bool converged;
};

// Projected gradient descent over the PPT superset with a Lagrangian dual
// certificate, started from the see-saw's separable witness (itself PPT
// feasible). The returned value is a sound lower bound on the relative
// entropy of entanglement regardless of convergence.
PgdResult ppt_lower(const ComplexMatrix& rho_mat, double rho_term, Index da, Index db,
                    double upper_hint, const ComplexMatrix& init,
                    const SeparabilityOptions& opts) {
  Index d = da * db;
  ComplexMatrix eye = ComplexMatrix::Identity(d, d);

  ComplexMatrix sigma = (1.0 - 1e-9) * init + (1e-9 / static_cast<double>(d)) * eye;
  sigma = 0.5 * (sigma + sigma.adjoint());
  double f_cur = objective(rho_mat, rho_term, sigma);

  double best_lower = 0.0;
  bool stalled = false;

  auto certify = [&](const ComplexMatrix& s) {
    // Certificates at interior-shifted points only: full rank keeps the
    // objective/gradient pair exact, which the convexity bound needs.
    for (double theta : {1e-7, 1e-6, 1e-4, 1e-3, 1e-2}) {
      ComplexMatrix st = (1.0 - theta) * s + (theta / static_cast<double>(d)) * eye;
      EigSystem es = eig_hermitian(st);
      double f = objective_from_eigs(rho_mat, rho_term, es);
      ComplexMatrix g = objective_gradient(rho_mat, es);
      double g_dot_sigma = (g * st).trace().real();
      double lmo = lmo_ppt_lower(g, da, db, g_dot_sigma, opts.dual_ascent_iters);
      best_lower = std::max(best_lower, f - g_dot_sigma + lmo);
    }
  };

  certify(sigma);
  double step = 0.5;
  int no_progress = 0;
  for (int it = 0; it < opts.pgd_max_iters; ++it) {
    if (best_lower >= upper_hint - opts.target_width) break;
    EigSystem es = eig_hermitian(sigma);
    ComplexMatrix g = objective_gradient(rho_mat, es);
    bool moved = false;
    for (int bt = 0; bt < 24; ++bt) {
      ComplexMatrix proj = dykstra_project(sigma - step * g, da, db, opts.dykstra_iters);
      // Keep iterates strictly inside the PSD cone so the objective stays
      // finite across line-search comparisons.
      ComplexMatrix cand =
          (1.0 - 1e-9) * proj + (1e-9 / static_cast<double>(d)) * eye;
      double f_new = objective(rho_mat, rho_term, cand);
      if (f_new < f_cur - 1e-13) {
        sigma = cand;
        f_cur = f_new;
        step = std::min(step * 1.4, 64.0);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      ++no_progress;
      if (no_progress >= 2) {
        stalled = true;
        break;
      }
      step = 0.5;
    }
    if (f_cur <= best_lower + 1e-10) break;
    if (it == opts.pgd_max_iters / 2) certify(sigma);
  }
  certify(sigma);
  bool converged = stalled || (best_lower >= upper_hint - 5e-2);
  return {std::max(best_lower, 0.0), converged};
}

}  // namespace

CoherenceOracle::CoherenceOracle(Index dim) : dim_(dim) {
  if (dim < 2) throw std::invalid_argument("CoherenceOracle: dim < 2");
}

ResourceBracket CoherenceOracle::closest_free(const DensityMatrix& rho) const {
  if (rho.dim() != dim_)
    throw std::invalid_argument("CoherenceOracle: state dim mismatch");
  double v = std::max(entropy_of_diagonal(rho) - von_neumann_entropy(rho), 0.0);
  ResourceBracket out;
  out.lower = v;
  out.upper = v;
  out.converged = true;
  ComplexMatrix diag = rho.mat().diagonal().asDiagonal();
  out.upper_witness = DensityMatrix::trusted(std::move(diag));
  return out;
}

double CoherenceOracle::diameter_kappa() const {
  return std::log2(static_cast<double>(dim_));
}

DensityMatrix CoherenceOracle::full_rank_witness() const {
  return DensityMatrix::maximally_mixed(dim_);
}

bool CoherenceOracle::is_free(const DensityMatrix& sigma, double tol) const {
  if (sigma.dim() != dim_) return false;
  ComplexMatrix off = sigma.mat();
  off.diagonal().setZero();
  return max_abs_entry(off) <= tol;
}

SeparabilityOracle::SeparabilityOracle(Index dim_a, Index dim_b, SeparabilityOptions opts)
    : dim_a_(dim_a), dim_b_(dim_b), opts_(opts) {
  if (dim_a < 2 || dim_b < 2)
    throw std::invalid_argument("SeparabilityOracle: bad subsystem dims");
  if (dim_a * dim_b > 16)
    throw std::invalid_argument("SeparabilityOracle: dA*dB > 16 unsupported");
}

namespace {

ResourceBracket separability_bracket_pass(const DensityMatrix& rho, Index da, Index db,
                                          double kappa, const SeparabilityOptions& opts) {
  double rho_term = tr_rho_log_rho(rho);
  Rng rng = Rng::stream(opts.seed, "separability_seesaw");

  SeesawResult up = seesaw_upper(rho.mat(), rho_term, da, db, opts, rng);
  ResourceBracket out;
  out.upper = std::clamp(up.upper, 0.0, kappa);
  out.upper_witness = DensityMatrix::trusted(0.5 * (up.sigma + up.sigma.adjoint()));
  if (out.upper <= 1e-6) {
    out.lower = 0.0;
    out.converged = true;
    return out;
  }
  PgdResult lo = ppt_lower(rho.mat(), rho_term, da, db, out.upper,
                           out.upper_witness->mat(), opts);
  out.lower = std::min(lo.lower, out.upper);
  out.converged = (up.converged && lo.converged) || out.width() <= opts.target_width;
  return out;
}

}  // namespace

ResourceBracket SeparabilityOracle::closest_free(const DensityMatrix& rho) const {
  if (rho.dim() != dim())
    throw std::invalid_argument("SeparabilityOracle: state dim mismatch");
  // At dA*dB <= 6 the PPT condition characterizes separability exactly, so a
  // PPT input is its own closest free state.
  if (dim() <= 6 && is_free(rho, 1e-11)) {
    ResourceBracket out;
    out.lower = 0.0;
    out.upper = 0.0;
    out.converged = true;
    out.upper_witness = rho;
    return out;
  }
  double kappa = diameter_kappa();
  ResourceBracket out = separability_bracket_pass(rho, dim_a_, dim_b_, kappa, opts_);
  if (out.width() > 2.0 * opts_.target_width) {
    // Second pass with cranked effort on the hard states only.
    SeparabilityOptions boosted = opts_;
    boosted.seesaw_tol = opts_.seesaw_tol * 0.02;
    boosted.seesaw_restarts = opts_.seesaw_restarts * 2;
    boosted.pgd_max_iters = opts_.pgd_max_iters * 3;
    boosted.dual_ascent_iters = opts_.dual_ascent_iters * 3;
    boosted.line_search_iters = opts_.line_search_iters + 16;
    boosted.seed = opts_.seed ^ 0x9e3779b97f4a7c15ull;
    ResourceBracket retry =
        separability_bracket_pass(rho, dim_a_, dim_b_, kappa, boosted);
    if (retry.upper < out.upper) {
      out.upper = retry.upper;
      out.upper_witness = retry.upper_witness;
    }
    out.lower = std::min(std::max(out.lower, retry.lower), out.upper);
    out.converged = out.converged || retry.converged ||
                    out.width() <= opts_.target_width;
  }
  return out;
}

double SeparabilityOracle::diameter_kappa() const {
  return std::log2(static_cast<double>(std::min(dim_a_, dim_b_)));
}

DensityMatrix SeparabilityOracle::full_rank_witness() const {
  return DensityMatrix::maximally_mixed(dim());
}

bool SeparabilityOracle::is_free(const DensityMatrix& sigma, double tol) const {
  if (sigma.dim() != dim()) return false;
  ComplexMatrix pt = partial_transpose_b(sigma.mat(), dim_a_, dim_b_);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> s(0.5 * (pt + pt.adjoint()),
                                                 Eigen::EigenvaluesOnly);
  return s.eigenvalues().minCoeff() >= -tol;
}

KeyedEnsemble::KeyedEnsemble(int key_len_bits, std::vector<std::uint32_t> key_list,
                             std::vector<DensityMatrix> state_list, Index da, Index db)
    : key_len(key_len_bits),
      keys(std::move(key_list)),
      states(std::move(state_list)),
      dim_a(da),
      dim_b(db) {
  if (key_len < 0 || key_len > 20)
    throw std::invalid_argument("KeyedEnsemble: key_len out of range");
  if (keys.empty() || keys.size() != states.size())
    throw std::invalid_argument("KeyedEnsemble: keys/states mismatch or empty");
  for (std::uint32_t k : keys)
    if (key_len < 32 && k >= (1u << key_len))
      throw std::invalid_argument("KeyedEnsemble: key exceeds key_len bits");
  for (const DensityMatrix& s : states)
    if (s.dim() != da * db)
      throw std::invalid_argument("KeyedEnsemble: state dim != dA*dB");
}

KeyedEnsemble KeyedEnsemble::dense(int key_len_bits, std::vector<DensityMatrix> state_list,
                                   Index da, Index db) {
  std::vector<std::uint32_t> keys(state_list.size());
  for (std::size_t i = 0; i < keys.size(); ++i) keys[i] = static_cast<std::uint32_t>(i);
  if (state_list.size() != (1u << key_len_bits))
    throw std::invalid_argument("KeyedEnsemble::dense: need 2^key_len states");
  return KeyedEnsemble(key_len_bits, std::move(keys), std::move(state_list), da, db);
}

PseudoresourcePair::PseudoresourcePair(KeyedEnsemble l, KeyedEnsemble r,
                                       std::shared_ptr<const FreeSetOracle> o, double eta)
    : left(std::move(l)), right(std::move(r)), oracle(std::move(o)), claimed_eta(eta) {
  if (left.dim_a != right.dim_a || left.dim_b != right.dim_b)
    throw std::invalid_argument("PseudoresourcePair: ensembles on different spaces");
  if (!oracle || oracle->dim() != left.dim())
    throw std::invalid_argument("PseudoresourcePair: oracle dim mismatch");
  if (!(claimed_eta > 0.0))
    throw std::invalid_argument("PseudoresourcePair: claimed_eta must be positive");
}

ResourceBracket relative_entropy_of_resource(const DensityMatrix& rho,
                                             const FreeSetOracle& oracle) {
  ResourceBracket b = oracle.closest_free(rho);
  if (b.lower > b.upper + 1e-12)
    throw std::runtime_error("oracle bracket inverted");
  if (b.upper > oracle.diameter_kappa() + kBoundSlackTol)
    throw std::runtime_error("oracle bracket exceeds diameter");
  if (b.upper_witness && !oracle.is_free(*b.upper_witness, 1e-8))
    throw std::runtime_error("oracle witness not a free state");
  return b;
}

GapResult verify_gap_with_oracle(const KeyedEnsemble& left, const KeyedEnsemble& right,
                                 const FreeSetOracle& oracle, double claimed_eta) {
  if (left.size() > 1024 || right.size() > 1024)
    throw std::invalid_argument("verify_resource_gap: key set not exhaustible");
  std::vector<ResourceBracket> bl, br;
  bl.reserve(left.size());
  br.reserve(right.size());
  for (const DensityMatrix& s : left.states)
    bl.push_back(relative_entropy_of_resource(s, oracle));
  for (const DensityMatrix& s : right.states)
    br.push_back(relative_entropy_of_resource(s, oracle));

  double min_lower = std::numeric_limits<double>::infinity();
  double min_upper = std::numeric_limits<double>::infinity();
  for (const ResourceBracket& x : bl)
    for (const ResourceBracket& y : br) {
      double pair_lower = std::max({0.0, x.lower - y.upper, y.lower - x.upper});
      double pair_upper = std::max({0.0, x.upper - y.lower, y.upper - x.lower});
      min_lower = std::min(min_lower, pair_lower);
      min_upper = std::min(min_upper, pair_upper);
    }

  GapResult out;
  out.min_gap_lower = min_lower;
  out.min_gap_upper = min_upper;
  if (min_lower >= claimed_eta - kBoundSlackTol)
    out.status = GapStatus::certified;
  else if (min_upper < claimed_eta - kBoundSlackTol)
    out.status = GapStatus::violated;
  else
    out.status = GapStatus::indeterminate;
  out.report = make_bound_report("resource_gap", claimed_eta, min_lower);
  return out;
}

GapResult verify_resource_gap(const PseudoresourcePair& pair) {
  return verify_gap_with_oracle(pair.left, pair.right, *pair.oracle, pair.claimed_eta);
}

}  // namespace qrlab
