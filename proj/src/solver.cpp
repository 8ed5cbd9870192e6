#include "hyperdon/solver.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/SparseCholesky>

namespace hyperdon::solver {

namespace {

using functional::FunctionalState;

bool positive_definite(const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>& ldlt) {
  return ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() > 0.0;
}

void fill(Solution& out, const FunctionalState& s) {
  out.u = s.u;
  out.eta = s.eta;
  out.D_value = functional::evaluate_D(s);
  out.residual_u = functional::residual_u(s);
  out.residual_eta = functional::residual_eta(s);
}

double weighted_sq(const Eigen::VectorXd& w, const Eigen::VectorXcd& x) { return w.dot(x.cwiseAbs2()); }

}  // namespace

void validate(const SolveOptions& o) {
  if (!(o.grad_tol > 0.0)) throw ConfigError("grad_tol must be positive");
  if (o.max_outer < 1) throw ConfigError("max_outer must be at least 1");
  if (!(o.armijo_c > 0.0 && o.armijo_c < 1.0)) throw ConfigError("armijo_c must lie in (0,1)");
  if (!(o.armijo_shrink > 0.0 && o.armijo_shrink < 1.0)) throw ConfigError("armijo_shrink must lie in (0,1)");
  if (!(o.newton_regularization >= 0.0)) throw ConfigError("newton_regularization must be nonnegative");
}

FunctionalState state_of(const Problem& pr, const Solution& s) {
  return functional::make_state(pr, s.u, s.eta, s.beta0);
}

Eigen::VectorXcd k_differential(const Problem& pr, const Solution& s) {
  return functional::k_differential(state_of(pr, s));
}

Solution solve(const Problem& pr, const Eigen::VectorXcd& beta_input, const SolveOptions& opts,
               const InitialGuess* init) {
  validate(opts);
  const int V = pr.n_vertices();
  const auto split = bundle::harmonic_projection(*pr.bundle, beta_input);

  Solution out;
  out.k = pr.k;
  out.beta0 = split.beta0;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(V);
  if (init && init->u.size() > 0) {
    if (init->u.size() != V) throw DomainError("initial u has the wrong length");
    u = init->u;
  }
  auto eta_of = [&](const Eigen::VectorXd& x) {
    return functional::partial_minimize_eta(pr, x, out.beta0, opts.eta_solver);
  };
  FunctionalState s = functional::make_state(pr, u, eta_of(u), out.beta0);
  double J = functional::evaluate_D(s);
  out.D_initial = J;
  if (init && init->eta.size() > 0) {
    // The initial eta is measured against the input representative.
    const Eigen::VectorXcd e0 = init->eta + split.eta0;
    out.D_initial = functional::evaluate_D(functional::make_state(pr, u, e0, out.beta0));
  }
  out.history.push_back(J);
  double lambda = opts.newton_regularization;

  auto finish = [&](bool ok) {
    fill(out, s);
    out.converged = ok;
    out.eta_input = out.eta - split.eta0;
  };

  for (int it = 0;; ++it) {
    const double res_u = functional::residual_u(s);
    const double res_eta = functional::residual_eta(s);
    out.iterations = it;
    if (res_u <= opts.grad_tol && res_eta <= 1e-9) {
      finish(true);
      return out;
    }
    if (it >= opts.max_outer) break;

    const Eigen::VectorXd g = functional::gradient_D(s).u;
    Eigen::SparseMatrix<double> H = functional::hessian_matrix(s);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    // Start from the last successful shift, relaxed.
    double shift = std::max(opts.newton_regularization, lambda / 8.0 >= 1e-10 ? lambda / 8.0 : 0.0);
    for (int attempt = 0;; ++attempt) {
      Eigen::SparseMatrix<double> Hs = H;
      if (shift > 0.0)
        for (int v = 0; v < V; ++v) Hs.coeffRef(v, v) += shift;
      ldlt.compute(Hs);
      if (positive_definite(ldlt)) break;
      if (attempt > 200) throw NumericalError("Newton matrix stays indefinite after regularization");
      shift = shift > 0.0 ? 2.0 * shift : 1e-10;
    }
    lambda = shift;
    out.regularization = std::max(out.regularization, shift);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(3 * V);
    rhs.head(V) = -g;
    const Eigen::VectorXd du = ldlt.solve(rhs).head(V);
    const double slope = g.dot(du);

    bool accepted = false;
    double alpha = 1.0;
    for (int ls = 0; ls < 60; ++ls, alpha *= opts.armijo_shrink) {
      FunctionalState trial;
      double Jt;
      try {
        const Eigen::VectorXd ut = u + alpha * du;
        trial = functional::make_state(pr, ut, eta_of(ut), out.beta0);
        Jt = functional::evaluate_D(trial);
      } catch (const NumericalError&) {
        continue;
      }
      if (!std::isfinite(Jt)) continue;
      bool ok = Jt <= J + opts.armijo_c * alpha * slope;
      // Near the minimum the decrease drops below the rounding level of J;
      // accept then on the residual instead.
      if (!ok && std::abs(Jt - J) <= 1e-13 * std::abs(J)) {
        ok = functional::residual_u(trial) < res_u;
      }
      if (ok) {
        u = trial.u;
        s = std::move(trial);
        J = Jt;
        accepted = true;
        break;
      }
    }
    out.history.push_back(J);
    if (!accepted) {
      finish(false);
      throw NonConvergence("line search failed at iteration " + std::to_string(it) + ", residual " +
                               std::to_string(res_u),
                           out);
    }
  }
  finish(false);
  throw NonConvergence("no convergence within " + std::to_string(opts.max_outer) + " outer iterations, residual " +
                           std::to_string(out.residual_u),
                       out);
}

double gauge_distance(const Problem& pr, const Solution& a, const Solution& b) {
  const Eigen::VectorXcd qa = k_differential(pr, a), qb = k_differential(pr, b);
  const double d2 = pr.mass.dot((a.u - b.u).cwiseAbs2()) + weighted_sq(pr.area, qa - qb);
  const double s2 = std::max(pr.mass.dot(a.u.cwiseAbs2()) + weighted_sq(pr.area, qa),
                             pr.mass.dot(b.u.cwiseAbs2()) + weighted_sq(pr.area, qb));
  return std::sqrt(d2) / std::max(1.0, std::sqrt(s2));
}

MultistartReport multistart_uniqueness(const Problem& pr, const Eigen::VectorXcd& beta_input, int n_starts,
                                       double spread, const SolveOptions& opts) {
  if (n_starts < 2) throw DomainError("multistart needs at least two starts");
  if (!(spread >= 0.0)) throw DomainError("spread must be nonnegative");
  const int V = pr.n_vertices();
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> U(-spread, spread);
  MultistartReport rep;
  std::vector<Solution> sols;
  for (int i = 0; i < n_starts; ++i) {
    InitialGuess g;
    g.u.resize(V);
    g.eta.resize(V);
    for (int v = 0; v < V; ++v) g.u[v] = U(rng);
    for (int v = 0; v < V; ++v) g.eta[v] = {U(rng) / std::sqrt(2.0), U(rng) / std::sqrt(2.0)};
    StartRecord r;
    r.index = i;
    try {
      Solution s = solve(pr, beta_input, opts, &g);
      r.converged = true;
      r.D = s.D_value;
      r.residual_u = s.residual_u;
      r.iterations = s.iterations;
      sols.push_back(std::move(s));
    } catch (const NonConvergence& e) {
      r.error = e.what();
      r.D = e.best.D_value;
      r.residual_u = e.best.residual_u;
      r.iterations = e.best.iterations;
    } catch (const NumericalError& e) {
      r.error = e.what();
    }
    rep.starts.push_back(r);
  }
  rep.n_converged = static_cast<int>(sols.size());
  for (const auto& s : sols) {
    const Eigen::VectorXcd q = k_differential(pr, s);
    rep.scale = std::max(rep.scale, std::sqrt(pr.mass.dot(s.u.cwiseAbs2()) + weighted_sq(pr.area, q)));
  }
  for (size_t i = 0; i < sols.size(); ++i) {
    for (size_t j = i + 1; j < sols.size(); ++j) {
      rep.max_distance = std::max(rep.max_distance, gauge_distance(pr, sols[i], sols[j]));
      const double d2 = pr.mass.dot((sols[i].u - sols[j].u).cwiseAbs2()) +
                        weighted_sq(pr.mass, sols[i].eta - sols[j].eta);
      const double s2 = pr.mass.dot(sols[i].u.cwiseAbs2()) + weighted_sq(pr.mass, sols[i].eta);
      rep.max_distance_eta = std::max(rep.max_distance_eta, std::sqrt(d2) / std::max(1.0, std::sqrt(s2)));
    }
  }
  rep.unique = rep.n_converged == n_starts && rep.max_distance <= 1e-6;
  return rep;
}

std::vector<SweepPoint> sweep_ray(const Problem& pr, const Eigen::VectorXcd& beta0,
                                  const std::vector<double>& t_grid, const SolveOptions& opts, bool warm_start,
                                  bool keep_solutions) {
  for (size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0)) throw DomainError("sweep parameters must be nonnegative");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw DomainError("sweep grid must be increasing");
  }
  std::vector<SweepPoint> out;
  std::optional<InitialGuess> guess;
  for (double t : t_grid) {
    SweepPoint p;
    p.t = t;
    try {
      Solution s = solve(pr, t * beta0, opts, warm_start && guess ? &*guess : nullptr);
      p.converged = true;
      p.D = s.D_value;
      p.sup_u = s.u.maxCoeff();
      p.sup_q = k_differential(pr, s).cwiseAbs().maxCoeff();
      p.res_u = s.residual_u;
      p.res_eta = s.residual_eta;
      p.iters = s.iterations;
      guess = InitialGuess{s.u, {}};
      if (keep_solutions) p.solution = std::move(s);
    } catch (const NonConvergence& e) {
      p.error = e.what();
      p.D = e.best.D_value;
      p.res_u = e.best.residual_u;
      p.res_eta = e.best.residual_eta;
      p.iters = e.best.iterations;
    } catch (const NumericalError& e) {
      p.error = e.what();
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace hyperdon::solver
