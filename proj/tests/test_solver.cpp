#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hyperdon/solver.hpp"

using namespace hyperdon;
using namespace hyperdon::solver;

namespace {

constexpr double kPi = std::numbers::pi;

struct Fixture {
  geometry::HyperbolicMesh mesh;
  bundle::BundleData b;
  functional::Problem pr;
  bundle::HolomorphicBasis hb;
  Fixture(int level, int k)
      : mesh(geometry::generate_genus2_mesh(level)),
        b(bundle::build_bundle(mesh, k)),
        pr(b),
        hb(bundle::holomorphic_basis(mesh, k)) {}
  // A class built from every basis element with distinct weights.
  Eigen::VectorXcd generic_class(double t) const {
    Eigen::VectorXcd beta = Eigen::VectorXcd::Zero(mesh.n_faces());
    for (int i = 0; i < hb.dimension; ++i)
      beta += bundle::cplx(1.0 / (i + 1), 0.3 * i) * bundle::hodge_star_inv(hb.elements[i]);
    return t * beta;
  }
};

Fixture& fixture(int k) {
  static std::map<int, std::unique_ptr<Fixture>> cache;
  auto& f = cache[k];
  if (!f) f = std::make_unique<Fixture>(2, k);
  return *f;
}

}  // namespace

TEST_CASE("zero class gives the trivial solution") {
  for (int k = 2; k <= 4; ++k) {
    auto& fx = fixture(k);
    const auto s = solve(fx.pr, Eigen::VectorXcd::Zero(fx.mesh.n_faces()));
    CHECK(s.converged);
    CHECK(s.u.cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(s.eta.norm() == 0.0);
    CHECK(std::abs(s.D_value - 4.0 * kPi) <= 1e-6 * 4.0 * kPi);
  }
}

TEST_CASE("exact input class gives the trivial solution and recovers the primitive") {
  auto& fx = fixture(3);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> N01;
  Eigen::VectorXcd ep(fx.mesh.n_vertices);
  for (int v = 0; v < ep.size(); ++v) ep[v] = {N01(rng), N01(rng)};
  const auto s = solve(fx.pr, bundle::dbar(fx.b, ep));
  CHECK(s.converged);
  CHECK(s.u.cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(s.residual_u <= 1e-9);
  CHECK(s.residual_eta <= 1e-9);
  CHECK((s.eta_input + ep).norm() <= 1e-9 * ep.norm());
  CHECK(std::abs(s.D_value - 4.0 * kPi) <= 1e-6 * 4.0 * kPi);
}

TEST_CASE("small classes: D_min - 4π is quadratic with the second-variation coefficient") {
  auto& fx = fixture(2);
  const Eigen::VectorXcd beta = fx.generic_class(1.0);
  const Eigen::VectorXcd b0 = bundle::harmonic_projection(fx.b, beta).beta0;
  const double expected = 4.0 * bundle::form_norm(fx.b, b0) * bundle::form_norm(fx.b, b0);
  std::vector<double> ts = {1e-3, 2e-3, 4e-3}, ys;
  for (double t : ts) ys.push_back(solve(fx.pr, t * beta).D_value - 4.0 * kPi);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < ts.size(); ++i) {
    num += ys[i] * ts[i] * ts[i];
    den += std::pow(ts[i], 4);
  }
  const double a = num / den;
  for (size_t i = 0; i < ts.size(); ++i) CHECK(std::abs(ys[i] - a * ts[i] * ts[i]) <= 0.05 * ys[i]);
  CHECK(std::abs(a - expected) <= 0.01 * expected);
}

TEST_CASE("converged solutions satisfy both equations; descent and determinism") {
  for (int k = 2; k <= 4; ++k) {
    auto& fx = fixture(k);
    const auto s = solve(fx.pr, fx.generic_class(2.0));
    CHECK(s.converged);
    CHECK(s.residual_u <= 1e-9);
    CHECK(s.residual_eta <= 1e-9);
    const auto st = state_of(fx.pr, s);
    CHECK(bundle::holomorphicity_residual(fx.b, functional::k_differential(st)) <= 1e-6);
    CHECK(s.D_value <= s.D_initial);
    for (size_t i = 1; i < s.history.size(); ++i) CHECK(s.history[i] <= s.history[i - 1] * (1.0 + 1e-13));
    CHECK(s.D_value >= 4.0 * kPi);
    const auto s2 = solve(fx.pr, fx.generic_class(2.0));
    CHECK(s2.u.size() == s.u.size());
    CHECK(std::memcmp(s2.u.data(), s.u.data(), sizeof(double) * s.u.size()) == 0);
    CHECK(s2.D_value == s.D_value);
  }
}

TEST_CASE("direct and iterative inner solvers reach the same solution") {
  auto& fx = fixture(2);
  SolveOptions o;
  o.eta_solver = functional::LinearSolver::ConjugateGradient;
  const auto a = solve(fx.pr, fx.generic_class(1.5));
  const auto b = solve(fx.pr, fx.generic_class(1.5), o);
  CHECK(gauge_distance(fx.pr, a, b) <= 1e-8);
}

TEST_CASE("options validation and non-convergence reporting") {
  auto& fx = fixture(2);
  SolveOptions bad;
  bad.armijo_shrink = 1.5;
  CHECK_THROWS_AS(solve(fx.pr, fx.generic_class(1.0), bad), ConfigError);
  bad = {};
  bad.grad_tol = 0.0;
  CHECK_THROWS_AS(solve(fx.pr, fx.generic_class(1.0), bad), ConfigError);
  SolveOptions one;
  one.max_outer = 1;
  try {
    solve(fx.pr, fx.generic_class(3.0), one);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK_FALSE(e.best.converged);
    CHECK(e.best.iterations == 1);
    CHECK(e.best.D_value < e.best.D_initial);
  }
}

TEST_CASE("multistart: zero class and generic classes") {
  SolveOptions o;
  o.seed = 11;
  {
    auto& fx = fixture(2);
    const auto rep = multistart_uniqueness(fx.pr, Eigen::VectorXcd::Zero(fx.mesh.n_faces()), 10, 3.0, o);
    CHECK(rep.n_converged == 10);
    CHECK(rep.max_distance <= 1e-6);
    CHECK(rep.unique);
  }
  for (int k = 2; k <= 4; ++k) {
    auto& fx = fixture(k);
    const auto rep = multistart_uniqueness(fx.pr, fx.generic_class(1.0), 10, 3.0, o);
    CHECK(rep.n_converged == 10);
    CHECK(rep.max_distance <= 1e-6);
    CHECK(rep.max_distance_eta <= 1e-6);
    CHECK(rep.unique);
  }
}

TEST_CASE("sweep along a ray") {
  auto& fx = fixture(2);
  const Eigen::VectorXcd beta = fx.generic_class(1.0);
  std::vector<double> grid;
  for (int i = 0; i < 10; ++i) grid.push_back(0.5 * i);
  const auto warm = sweep_ray(fx.pr, beta, grid, {}, true, true);
  const auto cold = sweep_ray(fx.pr, beta, grid, {}, false, true);
  REQUIRE(warm.size() == grid.size());
  CHECK(warm[0].converged);
  CHECK(std::abs(warm[0].D - 4.0 * kPi) <= 1e-9);
  CHECK(warm[0].sup_u == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(warm[0].sup_q == 0.0);
  for (size_t i = 0; i < grid.size(); ++i) {
    CHECK(warm[i].converged);
    CHECK(cold[i].converged);
    if (i > 0) CHECK(warm[i].D >= warm[i - 1].D);
    CHECK(gauge_distance(fx.pr, *warm[i].solution, *cold[i].solution) <= 1e-8);
  }
  // sup u along the ray, reported only: the maximum principle forces u <= 0.
  std::string trace;
  for (const auto& p : warm) trace += std::to_string(p.sup_u) + " ";
  MESSAGE("sup u along the ray: " << trace);
  for (const auto& p : warm) CHECK(p.sup_u <= 1e-9);
  CHECK_THROWS_AS(sweep_ray(fx.pr, beta, {1.0, 0.5}), DomainError);
}
