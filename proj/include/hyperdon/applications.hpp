#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hyperdon/solver.hpp"

namespace hyperdon::applications {

using functional::Problem;
using solver::Solution;
using solver::SolveOptions;

struct ExtractedDifferential {
  Eigen::VectorXcd q;                          // e^{(k-1)ū_f} ∗_E β per face
  std::vector<bundle::cplx> coefficients;      // α^i = <s_i, q> against the orthonormal basis
  double holomorphicity_residual = 0.0;
  double span_defect = 0.0;                    // ‖q - Σ α^i s_i‖ / ‖q‖
};

// Pass the holomorphic basis of the problem's k to get coefficients and the
// span defect; without it only q and its residual are filled.
ExtractedDifferential extract_k_differential(const Problem& pr, const Solution& s,
                                             const bundle::HolomorphicBasis* basis = nullptr);

// Ratio between the differential of the named Gauss-type equations and the
// extracted one: q = 2 q_D for k = 2 (α = q/2), q = q_D for k = 3, and the
// Donaldson normalization itself for other k.
double named_factor(int k);

struct ImmersionData {
  double c = 0.0;
  Eigen::VectorXd lambda1;  // per face
  Eigen::VectorXd lambda2;
  Eigen::VectorXcd q;       // quadratic differential of the Gauss equation, per face
  Eigen::VectorXd u;        // conformal factor of the induced metric
  double gauss_residual = 0.0;      // sup-norm, discrete CMC Gauss equation
  double curvature_mismatch = 0.0;  // L² mismatch of -1 + λ1λ2 against the metric curvature
};

// k = 2 only. The solution is read in the shifted variable ū; for c = 0 that
// is u itself.
ImmersionData minimal_surface_data(const Problem& pr, const Solution& s, double c);

struct CmcResult {
  Solution solution;  // in ū
  ImmersionData data;
};
CmcResult cmc_solve(const Problem& pr, const Eigen::VectorXcd& beta_input, double c, const SolveOptions& opts = {});

// Discrete residual field 2 grad I / m of
// I(u) = ∫ ¼|∇u|² - u + Λ e^u - a |q|² e^{-p u}, with the q-term on faces.
Eigen::VectorXd gauss_residual_field(const Problem& pr, const Eigen::VectorXd& u, const Eigen::VectorXd& q_sq,
                                     double a, int p, double Lambda = 1.0);

struct FixedQResult {
  std::vector<double> t_grid;
  std::vector<Eigen::VectorXd> u_branch;  // empty vector where no solution was found
  std::vector<std::string> status;        // "ok" or "no-solution-found"
  std::vector<double> residual;
  std::vector<double> min_eigenvalue;     // smallest Jacobian eigenvalue w.r.t. the mass
  std::optional<double> fold_t;
};

// Stable-branch continuation of the fixed-differential equation
// Δu + 2 - 2e^u - 2κ t²|q|² e^{-(k-1)u} = 0, with κ = 1 for k = 2 (the
// Gauss equation), 8 for k = 3 and 4(k-1) otherwise; q is given in the named
// normalization. Starts from u = 0 at t = 0.
FixedQResult fixed_q_solve(const Problem& pr, const Eigen::VectorXcd& q, const std::vector<double>& t_grid,
                           bool locate_fold = true);

struct CrosscheckResult {
  double distance = 0.0;  // relative, in (u, q)
  double u_distance = 0.0;
  double q_distance = 0.0;
  Solution donaldson;
  Eigen::VectorXd u_fixed;
};

// Solves the fixed-q problem at t, feeds β = t e^{-(k-1)u} ∗⁻¹ q_D into the
// Donaldson solver and compares the two (u, q) pairs.
CrosscheckResult crosscheck_formulations(const Problem& pr, const Eigen::VectorXcd& q, double t,
                                         const SolveOptions& opts = {});

}  // namespace hyperdon::applications
