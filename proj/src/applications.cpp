#include "hyperdon/applications.hpp"

#include <cmath>

#include <Eigen/SparseCholesky>

#include "hyperdon/errors.hpp"
#include "hyperdon/linalg.hpp"

namespace hyperdon::applications {

namespace {

using bundle::cplx;

// Equation coefficient a·p of the I-type functional, written as a.
double fixed_q_a(int k) { return k == 2 ? 1.0 : 4.0; }

struct FixedQProblem {
  const Problem& pr;
  Eigen::VectorXd q_sq;  // |q|² per face, named normalization
  double a;
  int p;
  double Lambda = 1.0;

  Eigen::VectorXd face_decay(const Eigen::VectorXd& u) const {
    const Eigen::VectorXd e = -p * (pr.P * u);
    if (e.maxCoeff() > 300.0) throw NumericalError("e^{-(k-1)u} overflows");
    return e.array().exp();
  }
  Eigen::VectorXd gradient(const Eigen::VectorXd& u, double t) const {
    const Eigen::VectorXd f = pr.area.cwiseProduct(q_sq).cwiseProduct(face_decay(u));
    return 0.5 * (pr.K * u) + pr.mass.cwiseProduct((Lambda * u.array().exp() - 1.0).matrix()) +
           (a * p * t * t) * (pr.P.transpose() * f);
  }
  Eigen::VectorXd t_derivative(const Eigen::VectorXd& u, double t) const {
    const Eigen::VectorXd f = pr.area.cwiseProduct(q_sq).cwiseProduct(face_decay(u));
    return (2.0 * a * p * t) * (pr.P.transpose() * f);
  }
  Eigen::SparseMatrix<double> jacobian(const Eigen::VectorXd& u, double t) const {
    const int V = pr.n_vertices();
    const Eigen::VectorXd f = pr.area.cwiseProduct(q_sq).cwiseProduct(face_decay(u));
    std::vector<Eigen::Triplet<double>> d;
    for (int v = 0; v < V; ++v) d.emplace_back(v, v, Lambda * pr.mass[v] * std::exp(u[v]));
    Eigen::SparseMatrix<double> D(V, V);
    D.setFromTriplets(d.begin(), d.end());
    Eigen::SparseMatrix<double> J = 0.5 * pr.K + D;
    J -= (a * p * p * t * t) * Eigen::SparseMatrix<double>(pr.P.transpose() * f.asDiagonal() * pr.P);
    return J;
  }
  double residual(const Eigen::VectorXd& u, double t) const {
    return (2.0 * gradient(u, t).cwiseQuotient(pr.mass)).cwiseAbs().maxCoeff();
  }
  double merit(const Eigen::VectorXd& g) const { return g.cwiseAbs2().cwiseQuotient(pr.mass).sum(); }

  // Damped Newton from u; true when the residual reaches tol.
  bool newton(Eigen::VectorXd& u, double t, double tol = 1e-10) const {
    for (int it = 0; it < 60; ++it) {
      Eigen::VectorXd g;
      try {
        g = gradient(u, t);
      } catch (const NumericalError&) {
        return false;
      }
      if ((2.0 * g.cwiseQuotient(pr.mass)).cwiseAbs().maxCoeff() <= tol) return true;
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(jacobian(u, t));
      if (ldlt.info() != Eigen::Success) return false;
      const Eigen::VectorXd du = ldlt.solve(-g);
      const double m0 = merit(g);
      bool moved = false;
      for (double alpha = 1.0; alpha >= 1.0 / 256; alpha *= 0.5) {
        const Eigen::VectorXd ut = u + alpha * du;
        try {
          if (merit(gradient(ut, t)) < m0) {
            u = ut;
            moved = true;
            break;
          }
        } catch (const NumericalError&) {
        }
      }
      if (!moved) return (2.0 * g.cwiseQuotient(pr.mass)).cwiseAbs().maxCoeff() <= 1e-8;
    }
    return residual(u, t) <= 1e-8;
  }

  double min_eig(const Eigen::VectorXd& u, double t) const {
    const auto ep = linalg::smallest_eigenpairs(jacobian(u, t), pr.mass, 1, 6, 1e-8, 400, 3);
    return ep.values[0];
  }
};

}  // namespace

double named_factor(int k) { return k == 2 ? 2.0 : 1.0; }

ExtractedDifferential extract_k_differential(const Problem& pr, const Solution& s,
                                             const bundle::HolomorphicBasis* basis) {
  ExtractedDifferential out;
  out.q = solver::k_differential(pr, s);
  out.holomorphicity_residual = bundle::holomorphicity_residual(*pr.bundle, out.q);
  if (basis) {
    if (basis->k != pr.k) throw DomainError("basis was built for a different k");
    Eigen::VectorXcd r = out.q;
    for (const auto& e : basis->elements) {
      const cplx a = bundle::form_inner(*pr.bundle, e, out.q);
      out.coefficients.push_back(a);
      r -= a * e;
    }
    const double nq = bundle::form_norm(*pr.bundle, out.q);
    out.span_defect = nq > 0.0 ? bundle::form_norm(*pr.bundle, r) / nq : 0.0;
  }
  return out;
}

Eigen::VectorXd gauss_residual_field(const Problem& pr, const Eigen::VectorXd& u, const Eigen::VectorXd& q_sq,
                                     double a, int p, double Lambda) {
  FixedQProblem fq{pr, q_sq, a, p, Lambda};
  return 2.0 * fq.gradient(u, 1.0).cwiseQuotient(pr.mass);
}

ImmersionData minimal_surface_data(const Problem& pr, const Solution& s, double c) {
  if (pr.k != 2) throw DomainError("immersion data needs k = 2");
  if (!(c * c < 1.0)) throw DomainError("mean curvature must satisfy c² < 1");
  const double Lambda = 1.0 - c * c;
  ImmersionData d;
  d.c = c;
  d.u = s.u.array() - std::log(Lambda);
  d.q = (2.0 / std::sqrt(Lambda)) * solver::k_differential(pr, s);
  const Eigen::VectorXd uf = pr.P * d.u;
  const int F = pr.n_faces();
  d.lambda1.resize(F);
  d.lambda2.resize(F);
  for (int f = 0; f < F; ++f) {
    const double x = std::abs(d.q[f]) * std::exp(-uf[f]);
    d.lambda1[f] = c - x;
    d.lambda2[f] = c + x;
  }
  const Eigen::VectorXd q_sq = d.q.cwiseAbs2();
  d.gauss_residual = gauss_residual_field(pr, d.u, q_sq, 1.0, 1, Lambda).cwiseAbs().maxCoeff();
  // Metric curvature e^{-u}(-Δu/2 - 1) at vertices, averaged to faces.
  const Eigen::VectorXd lap = -(pr.K * d.u).cwiseQuotient(pr.mass);
  const Eigen::VectorXd kv = (-d.u).array().exp() * (-0.5 * lap.array() - 1.0);
  const Eigen::VectorXd kf = pr.P * kv;
  double err = 0.0;
  for (int f = 0; f < F; ++f) err += pr.area[f] * std::pow(-1.0 + d.lambda1[f] * d.lambda2[f] - kf[f], 2);
  d.curvature_mismatch = std::sqrt(err / pr.area.sum());
  return d;
}

CmcResult cmc_solve(const Problem& pr, const Eigen::VectorXcd& beta_input, double c, const SolveOptions& opts) {
  if (pr.k != 2) throw DomainError("CMC data needs k = 2");
  if (!(c * c < 1.0)) throw DomainError("mean curvature must satisfy c² < 1");
  CmcResult r;
  r.solution = solver::solve(pr, beta_input, opts);
  r.data = minimal_surface_data(pr, r.solution, c);
  return r;
}

FixedQResult fixed_q_solve(const Problem& pr, const Eigen::VectorXcd& q, const std::vector<double>& t_grid,
                           bool locate_fold) {
  if (q.size() != pr.n_faces()) throw DomainError("q has the wrong length");
  for (size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0)) throw DomainError("t must be nonnegative");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw DomainError("t grid must be increasing");
  }
  const int p = pr.k - 1;
  FixedQProblem fq{pr, q.cwiseAbs2(), fixed_q_a(pr.k), p, 1.0};
  FixedQResult out;
  out.t_grid = t_grid;
  double lo = 0.0;
  Eigen::VectorXd ulo = Eigen::VectorXd::Zero(pr.n_vertices());
  bool dead = false;

  auto attempt = [&](double t, Eigen::VectorXd& u) {
    Eigen::VectorXd g = fq.t_derivative(ulo, lo);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(fq.jacobian(ulo, lo));
    u = ulo;
    if (ldlt.info() == Eigen::Success && t > lo) u -= (t - lo) * ldlt.solve(g);
    if (!fq.newton(u, t)) return false;
    return fq.min_eig(u, t) > 0.0;
  };

  for (double t : t_grid) {
    if (!dead && t > lo) {
      double h = t - lo;
      while (true) {
        const double tt = std::min(lo + h, t);
        Eigen::VectorXd u;
        if (attempt(tt, u)) {
          lo = tt;
          ulo = u;
          if (lo >= t) break;
          h *= 2.0;
        } else {
          h *= 0.5;
          if (h <= 1e-3 * (lo + h)) {
            dead = true;
            if (locate_fold) out.fold_t = lo + 0.5 * h;
            break;
          }
        }
      }
    }
    if (!dead && t <= lo) {
      out.u_branch.push_back(ulo);
      out.status.push_back("ok");
      out.residual.push_back(fq.residual(ulo, t));
      out.min_eigenvalue.push_back(fq.min_eig(ulo, t));
    } else {
      out.u_branch.emplace_back();
      out.status.push_back("no-solution-found");
      out.residual.push_back(std::numeric_limits<double>::quiet_NaN());
      out.min_eigenvalue.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return out;
}

CrosscheckResult crosscheck_formulations(const Problem& pr, const Eigen::VectorXcd& q, double t,
                                         const SolveOptions& opts) {
  CrosscheckResult r;
  std::vector<double> grid;
  const int n = std::max(2, static_cast<int>(std::ceil(t / 0.05)) + 1);
  for (int i = 0; i < n; ++i) grid.push_back(t * i / (n - 1));
  if (t == 0.0) grid = {0.0};
  const auto fx = fixed_q_solve(pr, q, grid, false);
  if (fx.status.back() != "ok") throw NumericalError("fixed-q branch does not reach t; t is beyond the fold");
  r.u_fixed = fx.u_branch.back();

  const double kappa = named_factor(pr.k);
  const Eigen::VectorXd w = ((pr.k - 1) * (pr.P * r.u_fixed)).array().exp();
  const Eigen::VectorXcd beta = (t / kappa) * bundle::hodge_star_inv(q).cwiseQuotient(w.cast<cplx>());
  r.donaldson = solver::solve(pr, beta, opts);

  const Eigen::VectorXcd qd = kappa * solver::k_differential(pr, r.donaldson);
  const Eigen::VectorXcd tq = t * q;
  r.u_distance = std::sqrt(pr.mass.dot((r.donaldson.u - r.u_fixed).cwiseAbs2()));
  r.q_distance = bundle::form_norm(*pr.bundle, qd - tq);
  const double scale =
      std::sqrt(pr.mass.dot(r.u_fixed.cwiseAbs2()) + std::pow(bundle::form_norm(*pr.bundle, tq), 2));
  r.distance = std::hypot(r.u_distance, r.q_distance) / std::max(1.0, scale);
  return r;
}

}  // namespace hyperdon::applications
