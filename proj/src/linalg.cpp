#include "hyperdon/linalg.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "hyperdon/errors.hpp"

namespace hyperdon::linalg {

namespace {

bool positive_pivots(const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>& ldlt) {
  if (ldlt.info() != Eigen::Success) return false;
  const Eigen::VectorXd d = ldlt.vectorD();
  return d.minCoeff() > 0.0;
}

}  // namespace

EigenPairs smallest_eigenpairs(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& mass,
                               int nev, int block, double tol, int max_iter, std::uint64_t seed,
                               double shift) {
  const int n = static_cast<int>(A.rows());
  if (block <= 0) block = nev + 6;
  block = std::min(block, n);
  nev = std::min(nev, block);

  Eigen::SparseMatrix<double> M(n, n);
  {
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i < n; ++i) t.emplace_back(i, i, mass[i]);
    M.setFromTriplets(t.begin(), t.end());
  }
  const Eigen::VectorXd sqm = mass.cwiseSqrt();
  const double scale = std::max(1.0, A.cwiseAbs().sum() / mass.sum());

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  double s = shift;
  for (int attempt = 0;; ++attempt) {
    Eigen::SparseMatrix<double> B = A - s * M;
    ldlt.compute(B);
    if (positive_pivots(ldlt)) break;
    if (attempt > 60) throw NumericalError("could not find a shift below the spectrum");
    s -= std::max(1.0, std::abs(s)) * (attempt < 4 ? 0.5 : 2.0);
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N01;
  Eigen::MatrixXd X(n, block);
  for (int j = 0; j < block; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = N01(rng);

  EigenPairs out;
  out.shift = s;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::MatrixXd Y = ldlt.solve(mass.asDiagonal() * X);
    // Mass-orthonormalize through the scaled basis M^{1/2} Y.
    Eigen::MatrixXd Z = sqm.asDiagonal() * Y;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Z);
    Eigen::MatrixXd Qz = qr.householderQ() * Eigen::MatrixXd::Identity(n, block);
    Y = sqm.cwiseInverse().asDiagonal() * Qz;
    Eigen::MatrixXd AY = A * Y;
    Eigen::MatrixXd Ar = Y.transpose() * AY;
    Ar = 0.5 * (Ar + Ar.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ar);
    X = Y * es.eigenvectors();
    const Eigen::MatrixXd AX = AY * es.eigenvectors();
    Eigen::VectorXd res(nev);
    bool done = true;
    for (int j = 0; j < nev; ++j) {
      const double lam = es.eigenvalues()[j];
      Eigen::VectorXd r = AX.col(j) - lam * mass.cwiseProduct(X.col(j));
      res[j] = std::sqrt(r.cwiseProduct(mass.cwiseInverse()).dot(r)) / std::max(std::abs(lam), 1e-3 * scale);
      if (res[j] > tol) done = false;
    }
    out.values = es.eigenvalues().head(nev);
    out.vectors = X.leftCols(nev);
    out.residuals = res;
    out.iterations = it;
    if (done) {
      out.converged = true;
      break;
    }
  }
  return out;
}

Eigen::SparseMatrix<double> realify(const Eigen::SparseMatrix<std::complex<double>>& A) {
  const int r = static_cast<int>(A.rows()), c = static_cast<int>(A.cols());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(4 * A.nonZeros());
  for (int j = 0; j < A.outerSize(); ++j) {
    for (Eigen::SparseMatrix<std::complex<double>>::InnerIterator it(A, j); it; ++it) {
      const int i = static_cast<int>(it.row()), col = static_cast<int>(it.col());
      const double re = it.value().real(), im = it.value().imag();
      t.emplace_back(i, col, re);
      t.emplace_back(i + r, col + c, re);
      if (im != 0.0) {
        t.emplace_back(i, col + c, -im);
        t.emplace_back(i + r, col, im);
      }
    }
  }
  Eigen::SparseMatrix<double> R(2 * r, 2 * c);
  R.setFromTriplets(t.begin(), t.end());
  return R;
}

Eigen::VectorXd realify(const Eigen::VectorXcd& x) {
  Eigen::VectorXd r(2 * x.size());
  r.head(x.size()) = x.real();
  r.tail(x.size()) = x.imag();
  return r;
}

Eigen::VectorXcd complexify(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size() / 2;
  Eigen::VectorXcd c(n);
  c.real() = x.head(n);
  c.imag() = x.tail(n);
  return c;
}

}  // namespace hyperdon::linalg
