#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hyperdon/bundle.hpp"
#include "hyperdon/errors.hpp"

using namespace hyperdon;
using namespace hyperdon::bundle;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXcd random_complex(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> N01;
  Eigen::VectorXcd x(n);
  for (int i = 0; i < n; ++i) x[i] = cplx(N01(rng), N01(rng));
  return x;
}

const geometry::HyperbolicMesh& mesh_at(int level) {
  static std::map<int, geometry::HyperbolicMesh> cache;
  auto it = cache.find(level);
  if (it == cache.end()) it = cache.emplace(level, geometry::generate_genus2_mesh(level)).first;
  return it->second;
}

cplx mobius(cplx a, cplx z) { return (z - a) / (1.0 - std::conj(a) * z); }

// Relative error of dbar against the Wirtinger derivative of the section
// conj(z - z0)^2 (d/dz)^p, written in unit frames of the disk model.
double monomial_error(int level, int k) {
  const auto& m = mesh_at(level);
  const auto b = build_bundle(m, k);
  const int p = k - 1;
  const cplx z0(0.1, 0.05);
  auto lam = [](cplx z) { return 4.0 / std::pow(1.0 - std::norm(z), 2); };
  Eigen::VectorXcd eta = Eigen::VectorXcd::Zero(m.n_vertices);
  std::vector<bool> set(m.n_vertices, false);
  std::vector<int> probe;
  for (int f = 0; f < m.n_faces(); ++f) {
    const auto& z = m.disk[f];
    const cplx c = (z[0] + z[1] + z[2]) / 3.0;
    if (std::abs(c) > 0.6) continue;
    if (std::abs(c) < 0.4) probe.push_back(f);
    for (int i = 0; i < 3; ++i) {
      const int v = m.faces[f][i];
      if (set[v]) continue;
      const double psi = std::arg(mobius(z[i], z[(i + 1) % 3])) - m.halfedge_angle[3 * f + i];
      const cplx mu = std::pow(lam(z[i]), -0.5) * std::polar(1.0, psi);
      eta[v] = std::pow(std::conj(z[i] - z0), 2) * std::pow(mu, -p);
      set[v] = true;
    }
  }
  const Eigen::VectorXcd g = dbar(b, eta);
  double err = 0.0, scale = 0.0;
  for (int f : probe) {
    const auto& z = m.disk[f];
    const cplx c = geometry::disk_point_on_geodesic(z[0], geometry::disk_midpoint(z[1], z[2]), 2.0 / 3.0);
    const double psi = std::arg(mobius(z[0], z[1])) + geometry::disk_transport_angle(z[0], c);
    const cplx mu = std::pow(lam(c), -0.5) * std::polar(1.0, psi);
    const cplx expect = 2.0 * std::conj(c - z0) * std::conj(mu) * std::pow(mu, -p);
    err = std::max(err, std::abs(g[f] - expect));
    scale = std::max(scale, std::abs(expect));
  }
  return err / scale;
}

}  // namespace

TEST_CASE("connection holonomy and antisymmetry") {
  const auto& m = mesh_at(2);
  for (int k = 2; k <= 4; ++k) {
    const auto b = build_bundle(m, k);
    CHECK(std::abs(total_holonomy(b) + 4.0 * kPi * (k - 1)) <= 1e-8);
    const auto th = face_holonomy(b);
    for (int f = 0; f < m.n_faces(); ++f) {
      CHECK(std::abs(th[f] + (k - 1) * m.face_area[f]) <= 1e-10);
      const double lc = b.levi_civita[3 * f] + b.levi_civita[3 * f + 1] + b.levi_civita[3 * f + 2];
      const double wrapped = lc - 2.0 * kPi * std::round(lc / (2.0 * kPi));
      CHECK(std::abs(wrapped + m.face_area[f]) <= 1e-10);
    }
    for (int h = 0; h < m.n_halfedges(); ++h) CHECK(b.transport[h] == -b.transport[m.twin[h]]);
  }
  CHECK_THROWS_AS(build_bundle(m, 1), DomainError);
}

TEST_CASE("dbar linearity and the analytic monomial oracle") {
  const auto& m = mesh_at(2);
  const auto b = build_bundle(m, 3);
  std::mt19937_64 rng(3);
  CHECK(dbar(b, Eigen::VectorXcd::Zero(m.n_vertices)).norm() == 0.0);
  const auto x = random_complex(m.n_vertices, rng), y = random_complex(m.n_vertices, rng);
  const cplx a(0.3, -1.7);
  CHECK((dbar(b, a * x + y) - a * dbar(b, x) - dbar(b, y)).norm() <= 1e-12 * dbar(b, x).norm());

  for (int k = 2; k <= 3; ++k) {
    const double e2 = monomial_error(2, k), e3 = monomial_error(3, k), e4 = monomial_error(4, k);
    MESSAGE("k=" << k << " monomial dbar errors " << e2 << " " << e3 << " " << e4);
    CHECK(e3 < 0.7 * e2);
    CHECK(e4 < 0.7 * e3);
    CHECK(e4 < 0.1);
  }
}

TEST_CASE("dbar adjoint identity and positivity") {
  const auto& m = mesh_at(2);
  const auto b = build_bundle(m, 2);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  CHECK(dbar_adjoint(b, Eigen::VectorXcd::Zero(m.n_faces()), Eigen::VectorXd::Ones(m.n_faces())).norm() == 0.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd w(m.n_faces());
    for (int f = 0; f < m.n_faces(); ++f) w[f] = std::exp(U(rng));
    const auto beta = random_complex(m.n_faces(), rng);
    const auto ell = random_complex(m.n_vertices, rng);
    const Eigen::VectorXcd g = dbar(b, ell);
    cplx lhs = 0.0;
    for (int f = 0; f < m.n_faces(); ++f) lhs += m.face_area[f] * w[f] * std::conj(beta[f]) * g[f];
    const cplx rhs = section_inner(b, dbar_adjoint(b, beta, w), ell);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
  }
  CHECK(bochner_constant(b) > 0.0);
}

TEST_CASE("Hodge star: isometry, conjugate linearity, pairing identity") {
  const auto& m = mesh_at(1);
  const auto b = build_bundle(m, 2);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto b1 = random_complex(m.n_faces(), rng), b2 = random_complex(m.n_faces(), rng);
    const auto s1 = hodge_star(b1);
    for (int f = 0; f < m.n_faces(); ++f) CHECK(std::abs(std::abs(s1[f]) - std::abs(b1[f])) <= 1e-15);
    CHECK((hodge_star(cplx(0, 1) * b1) + cplx(0, 1) * s1).norm() == 0.0);
    CHECK((hodge_star_inv(s1) - b1).norm() == 0.0);
    double re = 0.0, im = 0.0;
    for (int f = 0; f < m.n_faces(); ++f) {
      re += m.face_area[f] * (b1[f].real() * b2[f].real() + b1[f].imag() * b2[f].imag());
      im += m.face_area[f] * (b1[f].real() * b2[f].imag() - b1[f].imag() * b2[f].real());
    }
    const cplx w = wedge(b, s1, b2);
    CHECK(std::abs(w - cplx(re, im)) <= 1e-14 * std::max(1.0, std::abs(w)));
  }
}

TEST_CASE("harmonic projection") {
  const auto& m = mesh_at(2);
  const auto b = build_bundle(m, 3);
  std::mt19937_64 rng(13);
  const auto eta = random_complex(m.n_vertices, rng);
  const Eigen::VectorXcd exact = dbar(b, eta);
  const auto h = harmonic_projection(b, exact);
  CHECK(form_norm(b, h.beta0) <= 1e-10 * form_norm(b, exact));
  for (int trial = 0; trial < 20; ++trial) {
    const auto beta = random_complex(m.n_faces(), rng);
    const auto s = harmonic_projection(b, beta);
    CHECK(form_norm(b, beta - s.beta0 - dbar(b, s.eta0)) <= 1e-10 * form_norm(b, beta));
    const Eigen::VectorXcd adj = dbar_adjoint(b, s.beta0, Eigen::VectorXd::Ones(m.n_faces()));
    CHECK(section_norm(b, adj) <= 1e-9 * form_norm(b, beta));
    const auto s2 = harmonic_projection(b, s.beta0);
    CHECK(form_norm(b, s2.beta0 - s.beta0) <= 1e-10 * form_norm(b, s.beta0));
  }
}

TEST_CASE("holomorphic bases have the Riemann-Roch dimension") {
  const auto& m = mesh_at(2);
  for (int k = 2; k <= 4; ++k) {
    const auto hb = holomorphic_basis(m, k);
    const auto b = build_bundle(m, k);
    CHECK(hb.dimension == 2 * k - 1);
    CHECK(static_cast<int>(hb.elements.size()) == 2 * k - 1);
    CHECK(hb.gap_ratio >= 1e3);
    // The largest relative jump in the spectrum sits exactly at the dimension.
    int best = 0;
    for (int i = 1; i < 20; ++i) {
      if (hb.singular_values[i] / hb.singular_values[i - 1] >
          hb.singular_values[best + 1] / hb.singular_values[best])
        best = i - 1;
    }
    CHECK(best + 1 == hb.dimension);
    for (int i = 0; i < hb.dimension; ++i) {
      for (int j = 0; j < hb.dimension; ++j) {
        const cplx g = form_inner(b, hb.elements[i], hb.elements[j]);
        CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) <= 1e-10);
      }
      CHECK(holomorphicity_residual(b, hb.elements[i]) <= 1e-12);
      // Their Hodge duals are harmonic representatives.
      const auto beta = hodge_star_inv(hb.elements[i]);
      CHECK(form_norm(b, harmonic_projection(b, beta).beta0 - beta) <= 1e-10);
    }
    CHECK(hb.sampling_defect < 0.01);
  }
}

TEST_CASE("Serre pairing of sampled differentials decays under refinement") {
  std::vector<double> ratio;
  for (int level = 2; level <= 4; ++level) {
    const auto& m = mesh_at(level);
    const auto b = build_bundle(m, 2);
    const auto hb = holomorphic_basis(m, 2);
    std::mt19937_64 rng(21);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const auto eta = random_complex(m.n_vertices, rng);
      const double r = std::abs(wedge(b, hb.sampled[0], dbar(b, eta))) /
                       (form_norm(b, hb.sampled[0]) * section_norm(b, eta));
      worst = std::max(worst, r);
    }
    ratio.push_back(worst);
  }
  MESSAGE("pairing ratios " << ratio[0] << " " << ratio[1] << " " << ratio[2]);
  CHECK(ratio[1] < 0.7 * ratio[0]);
  CHECK(ratio[2] < 0.7 * ratio[1]);
}

TEST_CASE("series basis agrees with the finite element near-kernel") {
  const auto& m = mesh_at(3);
  const auto b = build_bundle(m, 2);
  const auto hb = holomorphic_basis(m, 2);
  const auto fe = holomorphic_basis_fe(m, 2, false);
  MESSAGE("finite element singular values " << fe.singular_values[0] << " ... "
                                            << fe.singular_values[2] << " | " << fe.singular_values[3]);
  for (const auto& s : hb.elements) {
    Eigen::VectorXcd r = s;
    for (const auto& e : fe.elements) r -= e * form_inner(b, e, s);
    CHECK(form_norm(b, r) < 0.05);
  }
}

TEST_CASE("finite element kernel on a loaded mesh reports a coarse discretization") {
  const auto& g = mesh_at(1);
  std::map<geometry::EdgeKey, double> lengths;
  for (int e = 0; e < g.n_edges(); ++e) lengths[g.edges[e]] = g.edge_length[e];
  const auto loaded = geometry::build_mesh(2, g.n_vertices, g.faces, lengths);
  CHECK_THROWS_AS(holomorphic_basis(loaded, 2), DiscretizationError);
}

TEST_CASE("Bochner spectrum under refinement") {
  for (int k = 2; k <= 4; ++k) {
    std::vector<double> v;
    for (int level = 2; level <= 3; ++level) v.push_back(bochner_constant(build_bundle(mesh_at(level), k)));
    MESSAGE("k=" << k << " smallest eigenvalues " << v[0] << " " << v[1]);
    CHECK(v[1] >= v[0] - 1e-3);
    // Weitzenböck value for the norm with |dz̄|² = 1/g: (k-1)/2.
    CHECK(std::abs(v[1] - 0.5 * (k - 1)) <= 0.01 * (k - 1));
  }
}
