#include "hyperdon/bundle.hpp"

#include <cmath>
#include <numbers>

#include "hyperdon/errors.hpp"
#include "hyperdon/linalg.hpp"

namespace hyperdon::bundle {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double x) {
  double y = x - 2.0 * kPi * std::round(x / (2.0 * kPi));
  if (y <= -kPi) y += 2.0 * kPi;
  return y;
}

Eigen::VectorXd doubled(const Eigen::VectorXd& x) {
  Eigen::VectorXd d(2 * x.size());
  d << x, x;
  return d;
}

}  // namespace

BundleData build_power_bundle(const HyperbolicMesh& mesh, int power) {
  BundleData b;
  b.mesh = &mesh;
  b.power = power;
  b.k = power + 1;
  const int F = mesh.n_faces(), H = mesh.n_halfedges();

  b.levi_civita.assign(H, 0.0);
  b.transport.assign(H, 0.0);
  for (int h = 0; h < H; ++h) {
    const int t = mesh.twin[h];
    if (t < h) continue;
    const double rho = mesh.halfedge_angle[t] + kPi - mesh.halfedge_angle[h];
    b.levi_civita[h] = rho;
    b.levi_civita[t] = -rho;
    b.transport[h] = wrap(power * rho);
    b.transport[t] = -b.transport[h];
  }

  b.face_frame.resize(F);
  b.wirtinger.resize(F);
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(3 * F);
  for (int f = 0; f < F; ++f) {
    const auto p = geometry::face_chart(mesh, f);
    const double A = mesh.face_area[f];
    for (int i = 0; i < 3; ++i) {
      // Average of the two edge-based alignments at this corner.
      b.face_frame[f][i] = std::arg(p[(i + 1) % 3] - p[i]) - mesh.halfedge_angle[3 * f + i] + A / 6.0;
      b.wirtinger[f][i] = cplx(0.0, 1.0) * (p[(i + 2) % 3] - p[(i + 1) % 3]) / (4.0 * A);
      trip.emplace_back(f, mesh.faces[f][i],
                        b.wirtinger[f][i] * std::polar(1.0, power * b.face_frame[f][i]));
    }
  }
  b.G.resize(F, mesh.n_vertices);
  b.G.setFromTriplets(trip.begin(), trip.end());
  b.G_real = linalg::realify(b.G);
  b.area = geometry::face_areas(mesh);
  b.mass = geometry::vertex_weights(mesh);

  Eigen::SparseMatrix<double> N = b.G_real.transpose() * doubled(b.area).asDiagonal() * b.G_real;
  auto solver = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(N);
  if (solver->info() != Eigen::Success) {
    throw NumericalError("factorization of the unit-weight dbar normal operator failed");
  }
  b.unit_solver = solver;
  return b;
}

BundleData build_bundle(const HyperbolicMesh& mesh, int k) {
  if (k < 2) throw DomainError("k must be at least 2");
  return build_power_bundle(mesh, k - 1);
}

std::vector<double> face_holonomy(const BundleData& b) {
  std::vector<double> th(b.n_faces());
  for (int f = 0; f < b.n_faces(); ++f) {
    th[f] = wrap(b.transport[3 * f] + b.transport[3 * f + 1] + b.transport[3 * f + 2]);
  }
  return th;
}

double total_holonomy(const BundleData& b) {
  double s = 0.0;
  for (double t : face_holonomy(b)) s += t;
  return s;
}

Eigen::VectorXcd dbar(const BundleData& b, const Eigen::VectorXcd& eta) {
  if (eta.size() != b.n_vertices()) throw DomainError("section size does not match mesh");
  return b.G * eta;
}

Eigen::VectorXcd dbar_adjoint(const BundleData& b, const Eigen::VectorXcd& beta,
                              const Eigen::VectorXd& face_weight) {
  const Eigen::VectorXcd aw = beta.cwiseProduct(b.area.cwiseProduct(face_weight).cast<cplx>());
  Eigen::VectorXcd z = b.G.adjoint() * aw;
  return z.cwiseQuotient(b.mass.cast<cplx>());
}

Eigen::VectorXcd dbar_kdiff(const BundleData& b, const Eigen::VectorXcd& q) {
  return b.G.transpose() * q.cwiseProduct(b.area.cast<cplx>());
}

double holomorphicity_residual(const BundleData& b, const Eigen::VectorXcd& q) {
  const Eigen::VectorXcd r = dbar_kdiff(b, q);
  Eigen::SparseMatrix<double> absG = b.G.cwiseAbs();
  const Eigen::VectorXd s = absG.transpose() * q.cwiseAbs().cwiseProduct(b.area);
  const double den = s.norm();
  return den > 0.0 ? r.norm() / den : 0.0;
}

Eigen::VectorXcd hodge_star(const Eigen::VectorXcd& beta) { return beta.conjugate(); }
Eigen::VectorXcd hodge_star_inv(const Eigen::VectorXcd& q) { return q.conjugate(); }

cplx wedge(const BundleData& b, const Eigen::VectorXcd& alpha, const Eigen::VectorXcd& beta) {
  cplx s = 0.0;
  for (int f = 0; f < b.n_faces(); ++f) s += b.area[f] * alpha[f] * beta[f];
  return s;
}

cplx form_inner(const BundleData& b, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
  cplx s = 0.0;
  for (int f = 0; f < b.n_faces(); ++f) s += b.area[f] * std::conj(x[f]) * y[f];
  return s;
}

double form_norm(const BundleData& b, const Eigen::VectorXcd& x) {
  return std::sqrt(std::max(0.0, form_inner(b, x, x).real()));
}

cplx section_inner(const BundleData& b, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
  cplx s = 0.0;
  for (int v = 0; v < b.n_vertices(); ++v) s += b.mass[v] * std::conj(x[v]) * y[v];
  return s;
}

double section_norm(const BundleData& b, const Eigen::VectorXcd& x) {
  return std::sqrt(std::max(0.0, section_inner(b, x, x).real()));
}

HarmonicSplit harmonic_projection(const BundleData& b, const Eigen::VectorXcd& beta) {
  HarmonicSplit out;
  const Eigen::VectorXd A2 = doubled(b.area);
  const Eigen::VectorXd rhs = b.G_real.transpose() * A2.cwiseProduct(linalg::realify(beta));
  const double rn = rhs.norm();
  if (rn == 0.0) {
    out.beta0 = beta;
    out.eta0 = Eigen::VectorXcd::Zero(b.n_vertices());
    return out;
  }
  Eigen::VectorXd x = b.unit_solver->solve(rhs);
  const auto apply = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return b.G_real.transpose() * A2.cwiseProduct(b.G_real * y);
  };
  Eigen::VectorXd r = rhs - apply(x);
  for (int it = 0; it < 3 && r.norm() > 1e-14 * rn; ++it) {
    x += b.unit_solver->solve(r);
    r = rhs - apply(x);
  }
  out.residual = r.norm() / rn;
  if (!(out.residual <= 1e-10)) {
    throw NumericalError("harmonic projection solve failed, relative residual " +
                         std::to_string(out.residual));
  }
  out.eta0 = linalg::complexify(x);
  out.beta0 = beta - b.G * out.eta0;
  return out;
}

Eigen::VectorXcd project_holomorphic(const BundleData& b, const Eigen::VectorXcd& q) {
  return hodge_star(harmonic_projection(b, hodge_star_inv(q)).beta0);
}

BochnerResult bochner_spectrum(const BundleData& b, int count) {
  const Eigen::VectorXd A2 = doubled(b.area);
  Eigen::SparseMatrix<double> N = b.G_real.transpose() * A2.asDiagonal() * b.G_real;
  const auto ep = linalg::smallest_eigenpairs(N, doubled(b.mass), 2 * count, 2 * count + 8, 1e-9,
                                              600, 11, 0.0);
  if (!ep.converged) {
    throw NumericalError("Bochner eigen-iteration did not converge, residual " +
                         std::to_string(ep.residuals.maxCoeff()));
  }
  BochnerResult r;
  // The real form doubles every complex eigenvalue.
  for (int i = 0; i < count; ++i) r.spectrum.push_back(ep.values[2 * i]);
  r.value = ep.values[0];
  r.iterations = ep.iterations;
  return r;
}

double bochner_constant(const BundleData& b) { return bochner_spectrum(b, 1).value; }

}  // namespace hyperdon::bundle
