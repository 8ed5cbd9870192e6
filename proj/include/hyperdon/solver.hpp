#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperdon/errors.hpp"
#include "hyperdon/functional.hpp"

namespace hyperdon::solver {

using functional::Problem;

struct SolveOptions {
  double grad_tol = 1e-9;  // bound on the sup-norm first equation residual
  int max_outer = 200;
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;
  double newton_regularization = 0.0;
  std::uint64_t seed = 0;
  bool deterministic = true;
  functional::LinearSolver eta_solver = functional::LinearSolver::Direct;
};

// Throws ConfigError on out-of-range values.
void validate(const SolveOptions& opts);

struct Solution {
  int k = 2;
  Eigen::VectorXd u;
  Eigen::VectorXcd eta;        // relative to beta0
  Eigen::VectorXcd eta_input;  // relative to the input representative
  Eigen::VectorXcd beta0;      // harmonic representative of the class
  double D_value = 0.0;
  double D_initial = 0.0;
  double residual_u = 0.0;
  double residual_eta = 0.0;
  int iterations = 0;
  bool converged = false;
  double regularization = 0.0;  // largest shift added to the u block
  std::vector<double> history;  // J after each accepted step, starting with J(u0)
};

struct NonConvergence : NumericalError {
  Solution best;
  NonConvergence(const std::string& what, Solution s) : NumericalError(what), best(std::move(s)) {}
};

struct InitialGuess {
  Eigen::VectorXd u;
  Eigen::VectorXcd eta;  // optional; empty means eta(u)
};

// Minimizes D(u, eta) over the class of beta_input.
Solution solve(const Problem& pr, const Eigen::VectorXcd& beta_input, const SolveOptions& opts = {},
               const InitialGuess* init = nullptr);

functional::FunctionalState state_of(const Problem& pr, const Solution& s);
Eigen::VectorXcd k_differential(const Problem& pr, const Solution& s);

// Distance between two solutions in (u, q), relative to max(1, size).
double gauge_distance(const Problem& pr, const Solution& a, const Solution& b);

struct StartRecord {
  int index = 0;
  bool converged = false;
  double D = 0.0;
  double residual_u = 0.0;
  int iterations = 0;
  std::string error;
};

struct MultistartReport {
  std::vector<StartRecord> starts;
  int n_converged = 0;
  double max_distance = 0.0;      // pairwise, in (u, q), relative
  double max_distance_eta = 0.0;  // pairwise, in (u, eta), relative
  double scale = 1.0;
  bool unique = false;
};

MultistartReport multistart_uniqueness(const Problem& pr, const Eigen::VectorXcd& beta_input, int n_starts,
                                       double spread, const SolveOptions& opts = {});

struct SweepPoint {
  double t = 0.0;
  double D = 0.0;
  double sup_u = 0.0;
  double sup_q = 0.0;
  double res_u = 0.0;
  double res_eta = 0.0;
  int iters = 0;
  bool converged = false;
  std::string error;
  std::optional<Solution> solution;
};

// Solves the classes t·[beta0] for each t in the increasing grid.
std::vector<SweepPoint> sweep_ray(const Problem& pr, const Eigen::VectorXcd& beta0,
                                  const std::vector<double>& t_grid, const SolveOptions& opts = {},
                                  bool warm_start = true, bool keep_solutions = false);

}  // namespace hyperdon::solver
