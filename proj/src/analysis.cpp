#include "hyperdon/analysis.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "hyperdon/errors.hpp"
#include "hyperdon/linalg.hpp"

namespace hyperdon::analysis {

namespace {

using bundle::cplx;
using functional::FunctionalState;

Eigen::SparseMatrix<double> diagonal(const Eigen::VectorXd& d) {
  Eigen::SparseMatrix<double> D(d.size(), d.size());
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < d.size(); ++i) t.emplace_back(i, i, d[i]);
  D.setFromTriplets(t.begin(), t.end());
  return D;
}

// Random fields, alternating white noise and a heat-smoothed version.
class Sampler {
 public:
  Sampler(const Problem& pr, std::uint64_t seed) : pr_(pr), rng_(seed) {
    const Eigen::SparseMatrix<double> M = diagonal(pr.mass);
    scalar_.compute(M + pr.K);
    const auto& G = pr.bundle->G_real;
    Eigen::VectorXd a2(2 * pr.n_faces());
    a2 << pr.area, pr.area;
    Eigen::VectorXd m2(2 * pr.n_vertices());
    m2 << pr.mass, pr.mass;
    section_.compute(diagonal(m2) + Eigen::SparseMatrix<double>(G.transpose() * a2.asDiagonal() * G));
  }

  std::pair<Eigen::VectorXd, Eigen::VectorXcd> draw(bool smooth) {
    const int V = pr_.n_vertices();
    Eigen::VectorXd v(V);
    Eigen::VectorXd l(2 * V);
    for (int i = 0; i < V; ++i) v[i] = n_(rng_);
    for (int i = 0; i < 2 * V; ++i) l[i] = n_(rng_);
    if (smooth) {
      v = scalar_.solve(pr_.mass.cwiseProduct(v)).eval();
      Eigen::VectorXd m2(2 * V);
      m2 << pr_.mass, pr_.mass;
      l = section_.solve(m2.cwiseProduct(l)).eval();
    }
    Eigen::VectorXcd lc = linalg::complexify(l);
    const double nrm = std::sqrt(pr_.mass.dot(v.cwiseAbs2()) + pr_.mass.dot(lc.cwiseAbs2()));
    return {v / nrm, lc / nrm};
  }

 private:
  const Problem& pr_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> n_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> scalar_, section_;
};

struct PoincareSides {
  double lhs = 0.0;     // ∫ |dbar ℓ|² w
  double beta = 0.0;    // ∫ |β|² |ℓ|² w²
  double mass = 0.0;    // ∫ |ℓ|² w
};

PoincareSides poincare_sides(const FunctionalState& s, const Eigen::VectorXcd& l) {
  const Problem& pr = *s.problem;
  const Eigen::VectorXcd gl = pr.bundle->G * l;
  const Eigen::VectorXd lf = pr.P * l.cwiseAbs2();
  PoincareSides p;
  for (int f = 0; f < pr.n_faces(); ++f) {
    const double aw = pr.area[f] * s.face_weight[f];
    p.lhs += aw * std::norm(gl[f]);
    p.beta += aw * s.face_weight[f] * std::norm(s.beta[f]) * lf[f];
    p.mass += aw * lf[f];
  }
  return p;
}

}  // namespace

CertificationReport certify_second_variation(const Problem& pr, const Solution& sol, int n_samples,
                                             std::uint64_t seed) {
  CertificationReport rep;
  rep.n_samples = n_samples;
  const FunctionalState s = solver::state_of(pr, sol);
  const int V = pr.n_vertices();
  const double p = pr.k - 1;
  rep.residual_u = functional::residual_u(s);
  rep.residual_eta = functional::residual_eta(s);

  // (a) smallest Hessian eigenvalue w.r.t. the block mass.
  {
    Eigen::VectorXd m3(3 * V);
    m3 << pr.mass, pr.mass, pr.mass;
    const auto ep = linalg::smallest_eigenpairs(functional::hessian_matrix(s), m3, 1, 8, 1e-8, 600, seed + 1);
    rep.sigma = ep.values[0];
    rep.sigma_converged = ep.converged;
  }

  // Exact infimum of the Poincaré-type quotient: the face-mean quadrature of
  // |ℓ|² lumps onto vertices, so both weights are diagonal.
  {
    const Eigen::VectorXd aw = pr.area.cwiseProduct(s.face_weight);
    const Eigen::VectorXd c = pr.P.transpose() * aw.cwiseProduct(s.face_weight).cwiseProduct(s.beta.cwiseAbs2());
    const Eigen::VectorXd d = pr.P.transpose() * aw;
    Eigen::VectorXd c2(2 * V), d2(2 * V), a2(2 * pr.n_faces());
    c2 << c, c;
    d2 << d, d;
    a2 << aw, aw;
    const auto& G = pr.bundle->G_real;
    Eigen::SparseMatrix<double> L = G.transpose() * a2.asDiagonal() * G;
    L -= 2.0 * p * p * diagonal(c2);
    const auto ep = linalg::smallest_eigenpairs(L, d2, 2, 10, 1e-8, 600, seed + 2);
    rep.poincare_worst_ratio = ep.values[0] / (0.5 * p);
  }

  Sampler sampler(pr, seed);
  const double D0 = functional::evaluate_D(s);
  rep.remainder_margin = std::numeric_limits<double>::infinity();
  rep.weighted_poincare_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    const auto [v, l] = sampler.draw(i % 2 == 1);
    // (b) decomposition identity
    const double q = functional::hessian_form(s, v, l, v, l);
    const auto t = functional::second_variation_terms(s, v, l);
    rep.decomposition_error = std::max(rep.decomposition_error, std::abs(t.total() - q) / std::abs(q));
    // (c) remainder lower bound, (d) weighted Poincaré inequality
    const auto ps = poincare_sides(s, l);
    const double rb = 2.0 * p * ps.mass;
    rep.remainder_margin = std::min(rep.remainder_margin, (t.R - rb) / rb);
    const double rhs = 2.0 * p * p * ps.beta + 0.5 * p * ps.mass;
    rep.weighted_poincare_margin = std::min(rep.weighted_poincare_margin, (ps.lhs - rhs) / rhs);
    // (e) strict local minimum
    for (double delta : {1e-3, 1e-2}) {
      const auto st = functional::make_state(pr, sol.u + delta * v, sol.eta + delta * l, sol.beta0);
      if (!(functional::evaluate_D(st) > D0)) ++rep.local_min_violations;
    }
  }
  if (n_samples == 0) rep.remainder_margin = rep.weighted_poincare_margin = 0.0;

  auto fail = [&](bool bad, const std::string& name, double value) {
    if (!bad) return;
    std::ostringstream os;
    os << name << " (" << value << ")";
    rep.failures.push_back(os.str());
  };
  fail(!(rep.residual_u <= 1e-8), "criticality_u", rep.residual_u);
  fail(!(rep.residual_eta <= 1e-8), "criticality_eta", rep.residual_eta);
  fail(!(rep.sigma > 0.0), "sigma", rep.sigma);
  fail(!rep.sigma_converged, "sigma_eigensolver", rep.sigma);
  fail(!(rep.decomposition_error <= 1e-10), "decomposition_identity", rep.decomposition_error);
  fail(!(rep.remainder_margin >= -kInequalitySlack), "remainder_bound", rep.remainder_margin);
  fail(!(rep.weighted_poincare_margin >= -kInequalitySlack), "weighted_poincare", rep.weighted_poincare_margin);
  fail(rep.local_min_violations != 0, "strict_local_min", rep.local_min_violations);
  return rep;
}

double certify_bochner(const geometry::HyperbolicMesh& mesh, int k) {
  const auto b = bundle::build_bundle(mesh, k);
  const auto r = bundle::bochner_spectrum(b, 4);
  const bool gated = !mesh.generated || mesh.level >= 3;
  if (gated && r.value < 0.95 * (k - 1)) {
    std::ostringstream os;
    os << "Bochner constant " << r.value << " below 0.95·(k-1) = " << 0.95 * (k - 1) << " for k=" << k
       << "; lowest eigenvalues";
    for (double x : r.spectrum) os << " " << x;
    throw CertificationError(os.str());
  }
  return r.value;
}

double certify_el_equivalence(const Problem& pr, const Solution& sol, int n_samples, std::uint64_t seed) {
  const FunctionalState s = solver::state_of(pr, sol);
  const int V = pr.n_vertices();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  const Eigen::VectorXd aw = pr.area.cwiseProduct(s.face_weight);
  const double nb = std::sqrt(aw.dot(s.beta.cwiseAbs2()));
  double worst = 0.0;
  if (nb == 0.0) return 0.0;
  for (int i = 0; i < n_samples; ++i) {
    Eigen::VectorXcd l(V);
    for (int v = 0; v < V; ++v) l[v] = {n01(rng), n01(rng)};
    const Eigen::VectorXcd gl = pr.bundle->G * l;
    cplx pair = 0.0;
    for (int f = 0; f < pr.n_faces(); ++f) pair += aw[f] * std::conj(s.beta[f]) * gl[f];
    worst = std::max(worst, std::abs(pair) / (nb * std::sqrt(aw.dot(gl.cwiseAbs2()))));
  }
  const Eigen::VectorXcd q = functional::k_differential(s);
  return std::max(worst, bundle::holomorphicity_residual(*pr.bundle, q));
}

}  // namespace hyperdon::analysis
