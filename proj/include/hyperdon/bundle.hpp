#pragma once

#include <array>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "hyperdon/geometry.hpp"

namespace hyperdon::bundle {

using cplx = std::complex<double>;
using geometry::HyperbolicMesh;

// Discrete U(1) connection on E = (T^{1,0})^{power}. For build_bundle the
// power is k-1. Sections live on vertices, forms and k-differentials on
// faces, all in orthonormal frames. The mesh must outlive the bundle.
struct BundleData {
  const HyperbolicMesh* mesh = nullptr;
  int k = 2;
  int power = 1;
  std::vector<double> transport;                  // per halfedge, wrapped to (-π, π]
  std::vector<double> levi_civita;                // weight-one rotation per halfedge, unwrapped
  std::vector<std::array<double, 3>> face_frame;  // weight-one frame angle per face corner
  std::vector<std::array<cplx, 3>> wirtinger;     // d/dz̄ of the barycentric functions
  Eigen::SparseMatrix<cplx> G;                    // dbar, F x V
  Eigen::SparseMatrix<double> G_real;             // 2F x 2V real form of G
  Eigen::VectorXd area;                           // face areas
  Eigen::VectorXd mass;                           // lumped vertex weights
  // Factorization of the unit-weight real normal operator G^T A G.
  std::shared_ptr<const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> unit_solver;

  int n_vertices() const { return mesh->n_vertices; }
  int n_faces() const { return mesh->n_faces(); }
};

BundleData build_bundle(const HyperbolicMesh& mesh, int k);
BundleData build_power_bundle(const HyperbolicMesh& mesh, int power);

// Wrapped holonomy of each face loop.
std::vector<double> face_holonomy(const BundleData& b);
double total_holonomy(const BundleData& b);

Eigen::VectorXcd dbar(const BundleData& b, const Eigen::VectorXcd& eta);
// Section ζ with Σ_f A_f w_f <β, dbar ℓ>_f = Σ_v m_v <ζ, ℓ>_v for all ℓ.
Eigen::VectorXcd dbar_adjoint(const BundleData& b, const Eigen::VectorXcd& beta,
                              const Eigen::VectorXd& face_weight);
// dbar of a k-differential, returned as the covector ℓ ↦ Σ_f A_f q_f (dbar ℓ)_f.
Eigen::VectorXcd dbar_kdiff(const BundleData& b, const Eigen::VectorXcd& q);
double holomorphicity_residual(const BundleData& b, const Eigen::VectorXcd& q);

// Conjugate-linear isometry A^{0,1}(E) -> A^{1,0}(E*); the wedge of a
// k-differential with a form is Σ_f A_f a_f b_f.
Eigen::VectorXcd hodge_star(const Eigen::VectorXcd& beta);
Eigen::VectorXcd hodge_star_inv(const Eigen::VectorXcd& q);
cplx wedge(const BundleData& b, const Eigen::VectorXcd& alpha, const Eigen::VectorXcd& beta);
// <x, y> = Σ A conj(x) y, optionally weighted.
cplx form_inner(const BundleData& b, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y);
double form_norm(const BundleData& b, const Eigen::VectorXcd& x);
cplx section_inner(const BundleData& b, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y);
double section_norm(const BundleData& b, const Eigen::VectorXcd& x);

struct HarmonicSplit {
  Eigen::VectorXcd beta0;
  Eigen::VectorXcd eta0;
  double residual = 0.0;  // relative residual of the normal equations
};
HarmonicSplit harmonic_projection(const BundleData& b, const Eigen::VectorXcd& beta);
// Orthogonal projection onto discrete holomorphic k-differentials, ker(G^T A).
Eigen::VectorXcd project_holomorphic(const BundleData& b, const Eigen::VectorXcd& q);

struct HolomorphicBasis {
  int k = 2;
  int dimension = 0;
  std::vector<Eigen::VectorXcd> elements;  // orthonormal in Σ A |.|²
  std::vector<Eigen::VectorXcd> sampled;   // continuum fields sampled at faces, before projection
  std::vector<double> singular_values;     // ascending
  double gap_ratio = 0.0;
  double sampling_defect = 0.0;
  std::string method;
};

// Requires k >= 2. Generated genus-2 meshes use an automorphic power series
// on the octagon; other meshes fall back to the finite element kernel.
HolomorphicBasis holomorphic_basis(const HyperbolicMesh& mesh, int k);
// With require_gap=false the near-kernel is returned even without a gap.
HolomorphicBasis holomorphic_basis_fe(const HyperbolicMesh& mesh, int k, bool require_gap = true);

struct BochnerResult {
  double value = 0.0;
  std::vector<double> spectrum;
  int iterations = 0;
};
BochnerResult bochner_spectrum(const BundleData& b, int count = 4);
double bochner_constant(const BundleData& b);

}  // namespace hyperdon::bundle
