#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "hyperdon/bundle.hpp"

namespace hyperdon::functional {

using bundle::BundleData;
using bundle::cplx;

// Operators shared by every state on one (mesh, k) pair.
struct Problem {
  const BundleData* bundle = nullptr;
  int k = 2;
  Eigen::SparseMatrix<double> K;  // Dirichlet stiffness, v^T K v = ∫|∇v|²
  Eigen::SparseMatrix<double> P;  // face averaging
  Eigen::VectorXd mass;
  Eigen::VectorXd area;

  explicit Problem(const BundleData& b);
  const geometry::HyperbolicMesh& mesh() const { return *bundle->mesh; }
  int n_vertices() const { return bundle->n_vertices(); }
  int n_faces() const { return bundle->n_faces(); }
};

struct FunctionalState {
  const Problem* problem = nullptr;
  Eigen::VectorXd u;
  Eigen::VectorXcd eta;
  Eigen::VectorXcd beta0;
  int k = 2;
  Eigen::VectorXcd beta;        // beta0 + dbar eta
  Eigen::VectorXd face_weight;  // exp((k-1) ū_f)
};

// Throws NumericalError when an exponent exceeds 300.
FunctionalState make_state(const Problem& pr, const Eigen::VectorXd& u, const Eigen::VectorXcd& eta,
                           const Eigen::VectorXcd& beta0);
// Largest relative deviation of the caches from a fresh recomputation.
double cache_defect(const FunctionalState& s);

struct Parts {
  double A = 0.0;  // ∫ ¼|∇u|² - u + e^u
  double B = 0.0;  // ∫ |β|² e^{(k-1)u}
  double D() const { return A + 4.0 * B; }
};
Parts evaluate_parts(const FunctionalState& s);
double evaluate_D(const FunctionalState& s);

// Euclidean gradients: dD[v, ℓ] = grad_u·v + Re(grad_eta^H ℓ).
struct Gradient {
  Eigen::VectorXd u;
  Eigen::VectorXcd eta;
};
Gradient gradient_D(const FunctionalState& s);

// Hessian in the real unknowns (v, Re ℓ, Im ℓ), blocks of size V.
struct HessianBlocks {
  Eigen::SparseMatrix<double> uu;    // V x V
  Eigen::SparseMatrix<double> eu;    // 2V x V
  Eigen::SparseMatrix<double> ee;    // 2V x 2V
};
HessianBlocks hessian_blocks(const FunctionalState& s);
Eigen::SparseMatrix<double> hessian_matrix(const FunctionalState& s);
double hessian_form(const FunctionalState& s, const Eigen::VectorXd& v1, const Eigen::VectorXcd& l1,
                    const Eigen::VectorXd& v2, const Eigen::VectorXcd& l2);

// Second variation split into the three groups of the positivity argument:
// T1 = ∫ e^u v² + 4|(k-1)vβ + dbar ℓ|² w, T2 the Leibniz square expanded with
// the discrete product rule, R the curvature remainder. At a critical point
// T1 + T2 + R equals the quadratic Hessian form.
struct SecondVariationTerms {
  double T1 = 0.0;
  double T2 = 0.0;
  double R = 0.0;
  double total() const { return T1 + T2 + R; }
};
SecondVariationTerms second_variation_terms(const FunctionalState& s, const Eigen::VectorXd& v,
                                            const Eigen::VectorXcd& l);

// First equation residual sup |Δu + 2 - 2e^u - 8(k-1)|β|²w|, assembled as
// 2 grad_u / m.
Eigen::VectorXd residual_u_field(const FunctionalState& s);
double residual_u(const FunctionalState& s);
// ‖G^H(A w β)‖ relative to ‖|G|^T(A w |β|)‖.
double residual_eta(const FunctionalState& s);

// The weighted dual k-differential q = e^{(k-1)ū_f} ∗_E β per face.
Eigen::VectorXcd k_differential(const FunctionalState& s);

enum class LinearSolver { Direct, ConjugateGradient };

struct EtaSolveInfo {
  double residual = 0.0;  // relative residual of the normal equations
  int iterations = 0;
};

// Minimizer of η ↦ D(u, η): solves G^H A w G η = -G^H A w β0.
Eigen::VectorXcd partial_minimize_eta(const Problem& pr, const Eigen::VectorXd& u,
                                      const Eigen::VectorXcd& beta0,
                                      LinearSolver method = LinearSolver::Direct,
                                      EtaSolveInfo* info = nullptr);

}  // namespace hyperdon::functional
