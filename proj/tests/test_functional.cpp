#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "hyperdon/errors.hpp"
#include "hyperdon/functional.hpp"
#include "hyperdon/linalg.hpp"

using namespace hyperdon;
using namespace hyperdon::functional;

namespace {

constexpr double kPi = std::numbers::pi;

struct Fixture {
  geometry::HyperbolicMesh mesh;
  bundle::BundleData b;
  Problem pr;
  Fixture(int level, int k) : mesh(geometry::generate_genus2_mesh(level)), b(bundle::build_bundle(mesh, k)), pr(b) {}
};

Fixture& fixture(int k) {
  static std::map<int, std::unique_ptr<Fixture>> cache;
  auto& f = cache[k];
  if (!f) f = std::make_unique<Fixture>(2, k);
  return *f;
}

Eigen::VectorXcd random_complex(int n, std::mt19937_64& rng, double s = 1.0) {
  std::normal_distribution<double> N01;
  Eigen::VectorXcd x(n);
  for (int i = 0; i < n; ++i) x[i] = s * cplx(N01(rng), N01(rng));
  return x;
}

Eigen::VectorXd random_real(int n, std::mt19937_64& rng, double s = 1.0) {
  std::uniform_real_distribution<double> U(-s, s);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = U(rng);
  return x;
}

// Smooth-ish random u: a few low modes of the vertex positions mixed with noise.
Eigen::VectorXd random_u(const Fixture& fx, std::mt19937_64& rng, double s) {
  const auto z = geometry::vertex_disk_positions(fx.mesh);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double a = U(rng), b = U(rng), c = U(rng);
  Eigen::VectorXd u(fx.mesh.n_vertices);
  for (int v = 0; v < u.size(); ++v) u[v] = s * (a * z[v].real() + b * z[v].imag() + c * std::norm(z[v]) + 0.2 * U(rng));
  return u;
}

Eigen::VectorXcd random_harmonic(const Fixture& fx, std::mt19937_64& rng, double s = 0.3) {
  return bundle::harmonic_projection(fx.b, random_complex(fx.mesh.n_faces(), rng, s)).beta0;
}

// Face-by-face quadrature of A and B from the chart coordinates alone.
Parts dense_oracle(const Fixture& fx, const Eigen::VectorXd& u, const Eigen::VectorXcd& eta,
                   const Eigen::VectorXcd& beta0, int k) {
  Parts p;
  const auto& m = fx.mesh;
  for (int f = 0; f < m.n_faces(); ++f) {
    const auto z = geometry::face_chart(m, f);
    const double A = m.face_area[f];
    Eigen::Matrix2d J;
    J << (z[1] - z[0]).real(), (z[1] - z[0]).imag(), (z[2] - z[0]).real(), (z[2] - z[0]).imag();
    const auto& fv = m.faces[f];
    const Eigen::Vector2d du(u[fv[1]] - u[fv[0]], u[fv[2]] - u[fv[0]]);
    const Eigen::Vector2d gu = J.fullPivLu().solve(du);
    double ubar = 0.0;
    cplx e[3];
    for (int i = 0; i < 3; ++i) {
      const int v = fv[i];
      p.A += A / 3.0 * (std::exp(u[v]) - u[v]);
      ubar += u[v] / 3.0;
      e[i] = eta[v] * std::polar(1.0, (k - 1) * fx.b.face_frame[f][i]);
    }
    p.A += 0.25 * A * gu.squaredNorm();
    const Eigen::Vector2d dre((e[1] - e[0]).real(), (e[2] - e[0]).real());
    const Eigen::Vector2d dim((e[1] - e[0]).imag(), (e[2] - e[0]).imag());
    const Eigen::Vector2d gr = J.fullPivLu().solve(dre), gi = J.fullPivLu().solve(dim);
    const cplx dzbar = 0.5 * (cplx(gr[0], gi[0]) + cplx(0.0, 1.0) * cplx(gr[1], gi[1]));
    p.B += A * std::norm(beta0[f] + dzbar) * std::exp((k - 1) * ubar);
  }
  return p;
}

}  // namespace

TEST_CASE("trivial state: D equals the hyperbolic area and is critical") {
  auto& fx = fixture(2);
  const int V = fx.mesh.n_vertices, F = fx.mesh.n_faces();
  const auto s = make_state(fx.pr, Eigen::VectorXd::Zero(V), Eigen::VectorXcd::Zero(V), Eigen::VectorXcd::Zero(F));
  CHECK(std::abs(evaluate_D(s) - 4.0 * kPi) <= 1e-8);
  const auto g = gradient_D(s);
  CHECK(g.u.cwiseAbs().maxCoeff() <= 1e-13);
  CHECK(g.eta.norm() == 0.0);
  CHECK(residual_u(s) <= 1e-12);
  CHECK(residual_eta(s) == 0.0);
}

TEST_CASE("A and B against the dense face quadrature oracle; quadratic scaling") {
  std::mt19937_64 rng(1);
  for (int k = 2; k <= 3; ++k) {
    auto& fx = fixture(k);
    for (int trial = 0; trial < 5; ++trial) {
      const auto u = random_u(fx, rng, 0.8);
      const auto eta = random_complex(fx.mesh.n_vertices, rng, 0.2);
      const auto b0 = random_complex(fx.mesh.n_faces(), rng, 0.3);
      const auto s = make_state(fx.pr, u, eta, b0);
      CHECK(cache_defect(s) <= 1e-14);
      const auto p = evaluate_parts(s);
      const auto o = dense_oracle(fx, u, eta, b0, k);
      CHECK(std::abs(p.A - o.A) <= 1e-12 * std::abs(o.A));
      CHECK(std::abs(p.B - o.B) <= 1e-12 * std::abs(o.B));
      CHECK(std::abs(evaluate_D(s) - (o.A + 4.0 * o.B)) <= 1e-12 * (o.A + 4.0 * o.B));
      const double t = 2.7;
      const auto st = make_state(fx.pr, u, t * eta, t * b0);
      CHECK(std::abs(evaluate_parts(st).B - t * t * p.B) <= 1e-14 * t * t * p.B);
    }
  }
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937_64 rng(2);
  for (int k = 2; k <= 4; ++k) {
    auto& fx = fixture(k);
    const int V = fx.mesh.n_vertices;
    const auto u = random_u(fx, rng, 0.5);
    const auto eta = random_complex(V, rng, 0.1);
    const auto b0 = random_harmonic(fx, rng);
    const auto s = make_state(fx.pr, u, eta, b0);
    const auto g = gradient_D(s);
    for (int trial = 0; trial < 3; ++trial) {
      // Direction of unit L² norm.
      Eigen::VectorXd v = random_u(fx, rng, 1.0);
      Eigen::VectorXcd l = random_complex(V, rng, 0.1);
      const double nrm = std::sqrt(fx.b.mass.dot(v.cwiseAbs2()) + fx.b.mass.dot(l.cwiseAbs2()));
      v /= nrm;
      l /= nrm;
      const double exact = g.u.dot(v) + (g.eta.adjoint() * l)(0).real();
      double best = 1.0;
      for (double h : {1e-3, 1e-4, 1e-5, 1e-6}) {
        const double fd = (evaluate_D(make_state(fx.pr, u + h * v, eta + h * l, b0)) -
                           evaluate_D(make_state(fx.pr, u - h * v, eta - h * l, b0))) /
                          (2.0 * h);
        const double rel = std::abs(fd - exact) / std::abs(exact);
        best = std::min(best, rel);
        // At h = 1e-3 the O(h²) truncation alone is of order 1e-6.
        if (h < 1e-3) CHECK(rel <= 1e-6);
        else CHECK(rel <= 1e-5);
      }
      CHECK(best <= 1e-6);
    }
  }
}

TEST_CASE("Hessian: symmetry, second differences, matrix agreement") {
  std::mt19937_64 rng(3);
  for (int k = 2; k <= 3; ++k) {
    auto& fx = fixture(k);
    const int V = fx.mesh.n_vertices;
    const auto u = random_u(fx, rng, 0.5);
    const auto eta = random_complex(V, rng, 0.1);
    const auto b0 = random_harmonic(fx, rng);
    const auto s = make_state(fx.pr, u, eta, b0);
    const auto H = hessian_matrix(s);
    CHECK((Eigen::SparseMatrix<double>(H.transpose()) - H).norm() <= 1e-13 * H.norm());
    for (int trial = 0; trial < 3; ++trial) {
      const auto v1 = random_u(fx, rng, 1.0), v2 = random_u(fx, rng, 1.0);
      const auto l1 = random_complex(V, rng, 0.1), l2 = random_complex(V, rng, 0.1);
      const double a = hessian_form(s, v1, l1, v2, l2), b = hessian_form(s, v2, l2, v1, l1);
      CHECK(std::abs(a - b) <= 1e-13 * std::max(1.0, std::abs(a)));
      Eigen::VectorXd x1(3 * V), x2(3 * V);
      x1 << v1, l1.real(), l1.imag();
      x2 << v2, l2.real(), l2.imag();
      CHECK(std::abs(x1.dot(H * x2) - a) <= 1e-12 * std::max(1.0, std::abs(a)));
      const double q = hessian_form(s, v1, l1, v1, l1);
      const double h = 1e-4;
      const double d2 = (evaluate_D(make_state(fx.pr, u + h * v1, eta + h * l1, b0)) - 2.0 * evaluate_D(s) +
                         evaluate_D(make_state(fx.pr, u - h * v1, eta - h * l1, b0))) /
                        (h * h);
      CHECK(std::abs(d2 - q) <= 1e-5 * std::abs(q));
    }
  }
}

TEST_CASE("second variation decomposition at an eta-critical state") {
  std::mt19937_64 rng(4);
  for (int k = 2; k <= 4; ++k) {
    auto& fx = fixture(k);
    const int V = fx.mesh.n_vertices;
    const auto u = random_u(fx, rng, 0.5);
    const auto b0 = random_harmonic(fx, rng, 1.0);
    const auto eta = partial_minimize_eta(fx.pr, u, b0);
    const auto s = make_state(fx.pr, u, eta, b0);
    for (int trial = 0; trial < 10; ++trial) {
      const auto v = random_u(fx, rng, 1.0);
      const auto l = random_complex(V, rng, 0.3);
      const double q = hessian_form(s, v, l, v, l);
      const auto t = second_variation_terms(s, v, l);
      CHECK(std::abs(t.total() - q) <= 1e-10 * std::abs(q));
      CHECK(t.T1 >= 0.0);
    }
  }
}

TEST_CASE("partial minimization in eta") {
  std::mt19937_64 rng(5);
  auto& fx = fixture(3);
  const int V = fx.mesh.n_vertices, F = fx.mesh.n_faces();
  const auto u = random_u(fx, rng, 0.7);
  CHECK(partial_minimize_eta(fx.pr, u, Eigen::VectorXcd::Zero(F)).norm() == 0.0);

  const auto b0 = random_harmonic(fx, rng, 1.0);
  CHECK(partial_minimize_eta(fx.pr, Eigen::VectorXd::Zero(V), b0).norm() <= 1e-9 * fx.b.area.cwiseProduct(b0.cwiseAbs2()).sum());

  EtaSolveInfo info;
  const auto eta = partial_minimize_eta(fx.pr, u, b0, LinearSolver::Direct, &info);
  CHECK(info.residual <= 1e-11);
  const auto s = make_state(fx.pr, u, eta, b0);
  CHECK(gradient_D(s).eta.norm() <= 1e-10 * gradient_D(make_state(fx.pr, u, Eigen::VectorXcd::Zero(V), b0)).eta.norm());
  CHECK(residual_eta(s) <= 1e-10);
  // Weak form of the second equation against random test sections.
  for (int trial = 0; trial < 50; ++trial) {
    const auto l = random_complex(V, rng);
    const Eigen::VectorXcd gl = fx.b.G * l;
    cplx pair = 0.0;
    double na = 0.0, nb = 0.0;
    for (int f = 0; f < F; ++f) {
      const double aw = fx.b.area[f] * s.face_weight[f];
      pair += aw * std::conj(s.beta[f]) * gl[f];
      na += aw * std::norm(s.beta[f]);
      nb += aw * std::norm(gl[f]);
    }
    CHECK(std::abs(pair) <= 1e-9 * std::sqrt(na * nb));
  }

  EtaSolveInfo cg;
  const auto eta_cg = partial_minimize_eta(fx.pr, u, b0, LinearSolver::ConjugateGradient, &cg);
  CHECK((eta_cg - eta).norm() <= 1e-9 * eta.norm());

  // Continuity of u -> eta(u) at first order.
  const auto dv = random_u(fx, rng, 1.0);
  double prev = 0.0;
  for (double d : {1e-2, 1e-3, 1e-4}) {
    const double diff = (partial_minimize_eta(fx.pr, u + d * dv, b0) - eta).norm();
    if (prev > 0.0) CHECK(std::abs(prev / diff - 10.0) <= 0.5);
    prev = diff;
  }
}

TEST_CASE("convexity in eta, lower bound, monotone elimination") {
  std::mt19937_64 rng(6);
  auto& fx = fixture(2);
  const int V = fx.mesh.n_vertices;
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = random_u(fx, rng, 1.5);
    const auto eta = random_complex(V, rng, 0.2);
    const auto b0 = random_harmonic(fx, rng, 0.5);
    const auto s = make_state(fx.pr, u, eta, b0);
    const double D = evaluate_D(s);
    CHECK(D >= 4.0 * kPi - 1e-6);
    const auto s2 = make_state(fx.pr, u, partial_minimize_eta(fx.pr, u, b0), b0);
    CHECK(evaluate_D(s2) <= D);
    if (trial < 5) {
      const auto h = hessian_blocks(s);
      const Eigen::VectorXd m2 = (Eigen::VectorXd(2 * V) << fx.b.mass, fx.b.mass).finished();
      const auto ep = linalg::smallest_eigenpairs(h.ee, m2, 1);
      CHECK(ep.values[0] > 0.0);
    }
  }
}

TEST_CASE("overflow and size guards") {
  auto& fx = fixture(3);
  const int V = fx.mesh.n_vertices, F = fx.mesh.n_faces();
  Eigen::VectorXd u = Eigen::VectorXd::Constant(V, 200.0);
  CHECK_THROWS_AS(make_state(fx.pr, u, Eigen::VectorXcd::Zero(V), Eigen::VectorXcd::Zero(F)), NumericalError);
  CHECK_THROWS_AS(make_state(fx.pr, Eigen::VectorXd::Zero(V - 1), Eigen::VectorXcd::Zero(V), Eigen::VectorXcd::Zero(F)),
                  DomainError);
}
