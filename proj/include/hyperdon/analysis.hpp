#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyperdon/solver.hpp"

namespace hyperdon::analysis {

using functional::Problem;
using solver::Solution;

struct CertificationReport {
  double sigma = 0.0;  // smallest eigenvalue of the Hessian w.r.t. the block mass
  bool sigma_converged = false;
  double decomposition_error = 0.0;
  // Worst relative slack (lhs - rhs) / rhs over the samples.
  double remainder_margin = 0.0;
  double weighted_poincare_margin = 0.0;
  // Exact infimum over all ℓ of the Poincaré-type ratio, divided by (k-1)/2;
  // 1 means the stated inequality is sharp, below 1 that it fails somewhere.
  double poincare_worst_ratio = 0.0;
  int local_min_violations = 0;
  int n_samples = 0;
  double residual_u = 0.0;
  double residual_eta = 0.0;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

// Slack accepted for the discretized inequalities.
inline constexpr double kInequalitySlack = 0.05;

// Runs every check at the given state. The state need not be converged;
// failures are listed by name in the report.
CertificationReport certify_second_variation(const Problem& pr, const Solution& s, int n_samples,
                                             std::uint64_t seed);

// Smallest eigenvalue of the unit-weight dbar*dbar; throws CertificationError
// when it falls below 0.95 (k-1) on a mesh of level >= 3 or a loaded mesh.
double certify_bochner(const geometry::HyperbolicMesh& mesh, int k);

// Max of the weak-form pairing residual over random sections and the
// holomorphicity residual of the extracted q.
double certify_el_equivalence(const Problem& pr, const Solution& s, int n_samples, std::uint64_t seed);

}  // namespace hyperdon::analysis
