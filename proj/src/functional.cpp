#include "hyperdon/functional.hpp"

#include <cmath>
#include <string>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "hyperdon/errors.hpp"
#include "hyperdon/linalg.hpp"

namespace hyperdon::functional {

namespace {

constexpr double kMaxExponent = 300.0;

Eigen::VectorXd doubled(const Eigen::VectorXd& x) {
  Eigen::VectorXd d(2 * x.size());
  d << x, x;
  return d;
}

Eigen::VectorXd weights(const Problem& pr, const Eigen::VectorXd& u) {
  if (u.size() != pr.n_vertices()) throw DomainError("u has the wrong length");
  if (!u.allFinite()) throw NumericalError("non-finite entries in u");
  const Eigen::VectorXd ubar = pr.P * u;
  const double top = std::max((pr.k - 1) * ubar.maxCoeff(), u.maxCoeff());
  if (top > kMaxExponent) {
    throw NumericalError("exponent " + std::to_string(top) +
                         " overflows e^{(k-1)u}; damp the line search step");
  }
  return ((pr.k - 1) * ubar).array().exp();
}

Eigen::SparseMatrix<double> weighted_normal(const Problem& pr, const Eigen::VectorXd& w) {
  const auto& G = pr.bundle->G_real;
  return G.transpose() * doubled(pr.area.cwiseProduct(w)).asDiagonal() * G;
}

}  // namespace

Problem::Problem(const BundleData& b)
    : bundle(&b),
      k(b.k),
      K(geometry::dirichlet_matrix(*b.mesh)),
      P(geometry::face_average_matrix(*b.mesh)),
      mass(b.mass),
      area(b.area) {}

FunctionalState make_state(const Problem& pr, const Eigen::VectorXd& u, const Eigen::VectorXcd& eta,
                           const Eigen::VectorXcd& beta0) {
  if (eta.size() != pr.n_vertices()) throw DomainError("eta has the wrong length");
  if (beta0.size() != pr.n_faces()) throw DomainError("beta0 has the wrong length");
  FunctionalState s;
  s.problem = &pr;
  s.u = u;
  s.eta = eta;
  s.beta0 = beta0;
  s.k = pr.k;
  s.face_weight = weights(pr, u);
  s.beta = beta0 + pr.bundle->G * eta;
  return s;
}

double cache_defect(const FunctionalState& s) {
  const auto fresh = make_state(*s.problem, s.u, s.eta, s.beta0);
  const double db = (fresh.beta - s.beta).norm() / std::max(fresh.beta.norm(), 1e-300);
  const double dw = (fresh.face_weight - s.face_weight).norm() / fresh.face_weight.norm();
  return std::max(db, dw);
}

Parts evaluate_parts(const FunctionalState& s) {
  const Problem& pr = *s.problem;
  Parts p;
  p.A = 0.25 * s.u.dot(pr.K * s.u) + pr.mass.dot((s.u.array().exp() - s.u.array()).matrix());
  p.B = (pr.area.array() * s.face_weight.array() * s.beta.array().abs2()).sum();
  return p;
}

double evaluate_D(const FunctionalState& s) { return evaluate_parts(s).D(); }

Gradient gradient_D(const FunctionalState& s) {
  const Problem& pr = *s.problem;
  const Eigen::VectorXd aw = pr.area.cwiseProduct(s.face_weight);
  Gradient g;
  g.u = 0.5 * (pr.K * s.u) + pr.mass.cwiseProduct((s.u.array().exp() - 1.0).matrix()) +
        4.0 * (s.k - 1) * (pr.P.transpose() * aw.cwiseProduct(s.beta.cwiseAbs2()));
  g.eta = 8.0 * (pr.bundle->G.adjoint() * s.beta.cwiseProduct(aw.cast<cplx>()));
  return g;
}

HessianBlocks hessian_blocks(const FunctionalState& s) {
  const Problem& pr = *s.problem;
  const int V = pr.n_vertices();
  const double p = s.k - 1;
  const Eigen::VectorXd aw = pr.area.cwiseProduct(s.face_weight);
  HessianBlocks h;
  Eigen::SparseMatrix<double> D(V, V);
  {
    std::vector<Eigen::Triplet<double>> t;
    for (int v = 0; v < V; ++v) t.emplace_back(v, v, pr.mass[v] * std::exp(s.u[v]));
    D.setFromTriplets(t.begin(), t.end());
  }
  h.uu = 0.5 * pr.K + D +
         4.0 * p * p * Eigen::SparseMatrix<double>(pr.P.transpose() * aw.cwiseProduct(s.beta.cwiseAbs2()).asDiagonal() * pr.P);
  Eigen::SparseMatrix<double> PP(2 * pr.n_faces(), V);
  {
    std::vector<Eigen::Triplet<double>> t;
    for (int j = 0; j < pr.P.outerSize(); ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(pr.P, j); it; ++it) {
        t.emplace_back(it.row(), it.col(), it.value());
        t.emplace_back(it.row() + pr.n_faces(), it.col(), it.value());
      }
    PP.setFromTriplets(t.begin(), t.end());
  }
  const Eigen::VectorXd awb = doubled(aw).cwiseProduct(linalg::realify(s.beta));
  const auto& G = pr.bundle->G_real;
  h.eu = 8.0 * p * Eigen::SparseMatrix<double>(G.transpose() * awb.asDiagonal() * PP);
  h.ee = 8.0 * weighted_normal(pr, s.face_weight);
  return h;
}

Eigen::SparseMatrix<double> hessian_matrix(const FunctionalState& s) {
  const auto h = hessian_blocks(s);
  const int V = s.problem->n_vertices();
  std::vector<Eigen::Triplet<double>> t;
  auto put = [&](const Eigen::SparseMatrix<double>& M, int r0, int c0) {
    for (int j = 0; j < M.outerSize(); ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(M, j); it; ++it)
        t.emplace_back(it.row() + r0, it.col() + c0, it.value());
  };
  put(h.uu, 0, 0);
  put(h.eu, V, 0);
  put(Eigen::SparseMatrix<double>(h.eu.transpose()), 0, V);
  put(h.ee, V, V);
  Eigen::SparseMatrix<double> H(3 * V, 3 * V);
  H.setFromTriplets(t.begin(), t.end());
  return H;
}

double hessian_form(const FunctionalState& s, const Eigen::VectorXd& v1, const Eigen::VectorXcd& l1,
                    const Eigen::VectorXd& v2, const Eigen::VectorXcd& l2) {
  const Problem& pr = *s.problem;
  const double p = s.k - 1;
  const Eigen::VectorXd aw = pr.area.cwiseProduct(s.face_weight);
  const Eigen::VectorXd a1 = pr.P * v1, a2 = pr.P * v2;
  const Eigen::VectorXcd g1 = pr.bundle->G * l1, g2 = pr.bundle->G * l2;
  double val = 0.5 * v1.dot(pr.K * v2) + (pr.mass.array() * s.u.array().exp() * v1.array() * v2.array()).sum();
  for (int f = 0; f < pr.n_faces(); ++f) {
    const cplx b = s.beta[f];
    val += 4.0 * aw[f] *
           (p * p * std::norm(b) * a1[f] * a2[f] +
            2.0 * p * (a1[f] * std::real(std::conj(b) * g2[f]) + a2[f] * std::real(std::conj(b) * g1[f])) +
            2.0 * std::real(std::conj(g1[f]) * g2[f]));
  }
  return val;
}

SecondVariationTerms second_variation_terms(const FunctionalState& s, const Eigen::VectorXd& v,
                                            const Eigen::VectorXcd& l) {
  const Problem& pr = *s.problem;
  const double p = s.k - 1;
  const auto& G = pr.bundle->G;
  const Eigen::VectorXd vf = pr.P * v;
  const Eigen::VectorXd lf = pr.P * l.cwiseAbs2();
  const Eigen::VectorXcd gl = G * l;
  const Eigen::VectorXcd X = G * v.cast<cplx>().cwiseProduct(l) - vf.cast<cplx>().cwiseProduct(gl);
  SecondVariationTerms t;
  t.T1 = (pr.mass.array() * s.u.array().exp() * v.array().square()).sum();
  t.T2 = 0.5 * v.dot(pr.K * v);
  for (int f = 0; f < pr.n_faces(); ++f) {
    const double A = pr.area[f], w = s.face_weight[f];
    const cplx b = s.beta[f];
    t.T1 += 4.0 * A * w * std::norm(p * vf[f] * b + gl[f]);
    t.T2 += 2.0 * A * (-4.0 * p * w * std::real(std::conj(b) * X[f]) + 4.0 * p * p * w * w * lf[f] * std::norm(b));
    t.R += 4.0 * A * (w * std::norm(gl[f]) - 2.0 * p * p * std::norm(b) * w * w * lf[f]);
  }
  return t;
}

Eigen::VectorXd residual_u_field(const FunctionalState& s) {
  return 2.0 * gradient_D(s).u.cwiseQuotient(s.problem->mass);
}

double residual_u(const FunctionalState& s) { return residual_u_field(s).cwiseAbs().maxCoeff(); }

double residual_eta(const FunctionalState& s) {
  const Problem& pr = *s.problem;
  const Eigen::VectorXd aw = pr.area.cwiseProduct(s.face_weight);
  const Eigen::VectorXcd r = pr.bundle->G.adjoint() * s.beta.cwiseProduct(aw.cast<cplx>());
  Eigen::SparseMatrix<double> absG = pr.bundle->G.cwiseAbs();
  const double den = (absG.transpose() * aw.cwiseProduct(s.beta.cwiseAbs())).norm();
  return den > 0.0 ? r.norm() / den : 0.0;
}

Eigen::VectorXcd k_differential(const FunctionalState& s) {
  return s.face_weight.cast<cplx>().cwiseProduct(bundle::hodge_star(s.beta));
}

Eigen::VectorXcd partial_minimize_eta(const Problem& pr, const Eigen::VectorXd& u,
                                      const Eigen::VectorXcd& beta0, LinearSolver method,
                                      EtaSolveInfo* info) {
  if (beta0.size() != pr.n_faces()) throw DomainError("beta0 has the wrong length");
  const int V = pr.n_vertices();
  const Eigen::VectorXd w = weights(pr, u);
  const auto& G = pr.bundle->G_real;
  const Eigen::VectorXd awb = doubled(pr.area.cwiseProduct(w)).cwiseProduct(linalg::realify(beta0));
  const Eigen::VectorXd rhs = -(G.transpose() * awb);
  Eigen::SparseMatrix<double> absG = G.cwiseAbs();
  const double scale = (absG.transpose() * awb.cwiseAbs()).norm();
  EtaSolveInfo local;
  if (!info) info = &local;
  if (scale == 0.0) {
    *info = {};
    return Eigen::VectorXcd::Zero(V);
  }
  const double den = std::max(rhs.norm(), 1e-14 * scale);
  const Eigen::SparseMatrix<double> N = weighted_normal(pr, w);
  Eigen::VectorXd x;
  double cond = 0.0;
  if (method == LinearSolver::Direct) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(N);
    if (ldlt.info() != Eigen::Success) throw NumericalError("weighted dbar normal operator: factorization failed");
    const Eigen::VectorXd d = ldlt.vectorD();
    cond = d.maxCoeff() / d.minCoeff();
    x = ldlt.solve(rhs);
    int it = 0;
    for (; it < 4; ++it) {
      const Eigen::VectorXd r = rhs - N * x;
      if (r.norm() <= 1e-14 * den) break;
      x += ldlt.solve(r);
    }
    info->iterations = it;
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::IncompleteCholesky<double>>
        cg;
    cg.setTolerance(1e-13 * den / std::max(rhs.norm(), 1e-300));
    cg.setMaxIterations(20 * V);
    cg.compute(N);
    x = cg.solve(rhs);
    info->iterations = static_cast<int>(cg.iterations());
    cond = -1.0;
  }
  info->residual = (rhs - N * x).norm() / den;
  if (!(info->residual <= 1e-11)) {
    throw NumericalError("partial minimization in eta did not reach tolerance, relative residual " +
                         std::to_string(info->residual) +
                         (cond > 0 ? ", pivot ratio " + std::to_string(cond) : std::string()));
  }
  return linalg::complexify(x);
}

}  // namespace hyperdon::functional
