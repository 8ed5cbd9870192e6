#pragma once

#include <cstdint>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace hyperdon::linalg {

struct EigenPairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // mass-orthonormal columns
  Eigen::VectorXd residuals;
  double shift = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Smallest eigenpairs of A x = λ diag(mass) x for a sparse symmetric A, by
// shift-invert block subspace iteration with Rayleigh-Ritz. The shift starts
// at `shift` and is lowered until A - shift*M factors as positive definite.
EigenPairs smallest_eigenpairs(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& mass,
                               int nev, int block = 0, double tol = 1e-9, int max_iter = 400,
                               std::uint64_t seed = 1, double shift = 0.0);

// Real 2n x 2n form [[Re, -Im], [Im, Re]] of a complex sparse matrix.
Eigen::SparseMatrix<double> realify(const Eigen::SparseMatrix<std::complex<double>>& A);
Eigen::VectorXd realify(const Eigen::VectorXcd& x);
Eigen::VectorXcd complexify(const Eigen::VectorXd& x);

}  // namespace hyperdon::linalg
