// Holomorphic k-differentials on the generated genus-2 surface.
//
// On the Poincaré-disk octagon a k-differential is q(z) dz^k with q
// holomorphic; it descends to the surface iff q(Az) A'(z)^k = q(z) for the
// four side-pairing translations A. q is expanded in a polynomial basis that
// is orthonormal on samples covering the octagon and bands around its sides
// (Vandermonde with Arnoldi), the pairing condition is imposed on the bands,
// and the kernel is read off an SVD.

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "hyperdon/bundle.hpp"
#include "hyperdon/errors.hpp"
#include "hyperdon/linalg.hpp"

namespace hyperdon::bundle {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGapRatio = 1e3;

struct ArnoldiPolys {
  Eigen::MatrixXcd H;  // (N+1) x N recurrence
  double nu0 = 1.0;
  int N = 0;

  Eigen::MatrixXcd build(const Eigen::VectorXcd& z, const Eigen::VectorXd& w, int degree) {
    N = degree;
    const Eigen::Index m = z.size();
    const Eigen::VectorXd w2 = w.cwiseAbs2() / static_cast<double>(m);
    H = Eigen::MatrixXcd::Zero(N + 1, N);
    Eigen::MatrixXcd Q(m, N + 1);
    nu0 = std::sqrt(w2.sum());
    Q.col(0).setConstant(1.0 / nu0);
    for (int j = 1; j <= N; ++j) {
      Eigen::VectorXcd v = z.cwiseProduct(Q.col(j - 1));
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXcd c = Q.leftCols(j).adjoint() * w2.cast<std::complex<double>>().cwiseProduct(v);
        H.col(j - 1).head(j) += c;
        v -= Q.leftCols(j) * c;
      }
      const double h = std::sqrt(w2.dot(v.cwiseAbs2()));
      H(j, j - 1) = h;
      Q.col(j) = v / h;
    }
    return Q;
  }

  Eigen::MatrixXcd eval(const Eigen::VectorXcd& z) const {
    Eigen::MatrixXcd E(z.size(), N + 1);
    E.col(0).setConstant(1.0 / nu0);
    for (int j = 1; j <= N; ++j) {
      Eigen::VectorXcd v = z.cwiseProduct(E.col(j - 1)) - E.leftCols(j) * H.col(j - 1).head(j);
      E.col(j) = v / H(j, j - 1);
    }
    return E;
  }
};

struct SpectralKernel {
  ArnoldiPolys polys;
  Eigen::MatrixXcd coeffs;  // (N+1) x d
  std::vector<double> singular_values;
  double gap = 0.0;
};

std::complex<double> translate(double a, std::complex<double> w) {
  const double t = std::tanh(0.5 * a);
  return (w + t) / (1.0 + t * w);
}

SpectralKernel compute_kernel(int k) {
  const int d = (2 * k - 1);  // genus 2
  const double rho = std::acosh(1.0 / std::tan(kPi / 8.0));
  const double delta = 0.25;
  const int ns = 70, nt = 7;
  const int degree = 200;

  std::vector<std::complex<double>> pts;
  auto theta = [](int s) { return kPi * s / 4.0 + kPi / 8.0; };
  auto band_index = [&](int s, int i, int j) { return (s * ns + i) * nt + j; };
  for (int s = 0; s < 8; ++s) {
    for (int i = 0; i < ns; ++i) {
      const double sigma = -(rho + delta) + 2.0 * (rho + delta) * i / (ns - 1);
      for (int j = 0; j < nt; ++j) {
        const double tau = -delta + 2.0 * delta * j / (nt - 1);
        const std::complex<double> w(0.0, std::tanh(0.5 * sigma));
        pts.push_back(std::polar(1.0, theta(s)) * translate(rho + tau, w));
      }
    }
  }
  const double m_mid = std::tanh(0.5 * rho);
  const double c_off = (1.0 + m_mid * m_mid) / (2.0 * m_mid);
  const double r_off = (1.0 - m_mid * m_mid) / (2.0 * m_mid);
  auto inside = [&](std::complex<double> z) {
    for (int s = 0; s < 8; ++s) {
      if (std::abs(z - std::polar(c_off, theta(s))) <= r_off) return false;
    }
    return true;
  };
  const double r_corner = std::acosh(std::pow(1.0 / std::tan(kPi / 8.0), 2));
  const double spacing = 0.12;
  pts.push_back(0.0);
  for (int i = 1; i * spacing < r_corner; ++i) {
    const double r = i * spacing;
    const int na = std::max(8, static_cast<int>(std::ceil(2.0 * kPi * std::sinh(r) / spacing)));
    for (int j = 0; j < na; ++j) {
      const auto z = std::polar(std::tanh(0.5 * r), 2.0 * kPi * (j + 0.5 * (i % 2)) / na);
      if (inside(z)) pts.push_back(z);
    }
  }

  const Eigen::Index m = static_cast<Eigen::Index>(pts.size());
  Eigen::VectorXcd Z(m);
  Eigen::VectorXd W(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    Z[i] = pts[i];
    W[i] = std::pow(1.0 - std::norm(pts[i]), k);
  }
  SpectralKernel K;
  const Eigen::MatrixXcd Q = K.polys.build(Z, W, degree);

  // Side s+4 is carried onto side s by the translation of length 2ρ along
  // direction θ_s; band point (i, j) lands on (ns-1-i, nt-1-j).
  const int rows = 4 * ns * nt;
  Eigen::MatrixXcd C(rows, degree + 1);
  const double t2 = std::tanh(rho);
  int r = 0;
  for (int s = 0; s < 4; ++s) {
    const auto rot = std::polar(1.0, theta(s));
    for (int i = 0; i < ns; ++i) {
      for (int j = 0; j < nt; ++j, ++r) {
        const int src = band_index(s + 4, i, j);
        const int dst = band_index(s, ns - 1 - i, nt - 1 - j);
        const auto z = pts[src];
        const auto wz = std::conj(rot) * z;
        const auto Az = rot * (wz + t2) / (1.0 + t2 * wz);
        if (std::abs(Az - pts[dst]) > 1e-10) {
          throw NumericalError("side-pairing sample grid is not symmetric");
        }
        const auto dA = (1.0 - t2 * t2) / ((1.0 + t2 * wz) * (1.0 + t2 * wz));
        C.row(r) = W[src] * (Q.row(dst) * std::pow(dA, k) - Q.row(src));
      }
    }
  }
  C /= std::sqrt(static_cast<double>(rows));

  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(C);
  const Eigen::MatrixXcd R =
      qr.matrixQR().topRows(degree + 1).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(R, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const int n = static_cast<int>(sv.size());
  for (int i = n - 1; i >= 0; --i) K.singular_values.push_back(sv[i]);
  K.gap = K.singular_values[d] / std::max(K.singular_values[d - 1], 1e-300);
  if (!(K.gap >= kGapRatio)) {
    std::ostringstream os;
    os << "discretization too coarse: singular-value gap " << K.gap << " < " << kGapRatio
       << "; smallest singular values:";
    for (int i = 0; i < std::min(n, d + 4); ++i) os << ' ' << K.singular_values[i];
    throw DiscretizationError(os.str());
  }
  K.coeffs = svd.matrixV().rightCols(d).rowwise().reverse();
  return K;
}

const SpectralKernel& spectral_kernel(int k) {
  static std::mutex mu;
  static std::map<int, SpectralKernel> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, compute_kernel(k)).first;
  return it->second;
}

// Project onto discrete holomorphic differentials and orthonormalize.
void finish_basis(const BundleData& b, HolomorphicBasis& out) {
  out.sampling_defect = 0.0;
  std::vector<Eigen::VectorXcd> proj;
  for (const auto& a : out.sampled) {
    proj.push_back(project_holomorphic(b, a));
    out.sampling_defect =
        std::max(out.sampling_defect, form_norm(b, a - proj.back()) / form_norm(b, a));
  }
  const int d = static_cast<int>(proj.size());
  Eigen::MatrixXcd gram(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) gram(i, j) = form_inner(b, proj[i], proj[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  if (es.eigenvalues().minCoeff() <= 1e-12 * es.eigenvalues().maxCoeff()) {
    throw NumericalError("holomorphic basis collapsed after projection");
  }
  const Eigen::MatrixXcd T = es.eigenvectors() *
                             es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                             es.eigenvectors().adjoint();
  out.elements.assign(d, Eigen::VectorXcd::Zero(b.n_faces()));
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) out.elements[j] += proj[i] * T(i, j);
}

}  // namespace

HolomorphicBasis holomorphic_basis(const HyperbolicMesh& mesh, int k) {
  if (k < 2) throw DomainError("k must be at least 2");
  if (!mesh.generated || mesh.genus != 2 || mesh.disk.empty()) return holomorphic_basis_fe(mesh, k);

  const SpectralKernel& K = spectral_kernel(k);
  const BundleData b = build_bundle(mesh, k);
  const int F = mesh.n_faces();
  const int d = static_cast<int>(K.coeffs.cols());

  Eigen::VectorXcd centers(F);
  Eigen::VectorXcd frame(F);
  for (int f = 0; f < F; ++f) {
    const auto& z = mesh.disk[f];
    const auto c = geometry::disk_point_on_geodesic(z[0], geometry::disk_midpoint(z[1], z[2]), 2.0 / 3.0);
    centers[f] = c;
    // Chart x-axis: direction of the edge from corner 0 to corner 1,
    // transported to the sample point.
    const double psi = std::arg((z[1] - z[0]) / (1.0 - std::conj(z[0]) * z[1])) +
                       geometry::disk_transport_angle(z[0], c);
    const double lam = 4.0 / std::pow(1.0 - std::norm(c), 2);
    frame[f] = std::pow(lam, -0.5 * k) * std::polar(1.0, k * psi);
  }
  const Eigen::MatrixXcd vals = K.polys.eval(centers) * K.coeffs;

  HolomorphicBasis out;
  out.k = k;
  out.dimension = d;
  out.method = "automorphic-series";
  out.singular_values = K.singular_values;
  out.gap_ratio = K.gap;
  for (int j = 0; j < d; ++j) out.sampled.push_back(vals.col(j).cwiseProduct(frame));
  finish_basis(b, out);
  return out;
}

HolomorphicBasis holomorphic_basis_fe(const HyperbolicMesh& mesh, int k, bool require_gap) {
  if (k < 2) throw DomainError("k must be at least 2");
  const int d = (2 * k - 1) * (mesh.genus - 1);
  const BundleData kb = build_power_bundle(mesh, -k);
  Eigen::VectorXd A2(2 * kb.n_faces()), M2(2 * kb.n_vertices());
  A2 << kb.area, kb.area;
  M2 << kb.mass, kb.mass;
  Eigen::SparseMatrix<double> N = kb.G_real.transpose() * A2.asDiagonal() * kb.G_real;
  const auto ep = linalg::smallest_eigenpairs(N, M2, 2 * (d + 1), 2 * (d + 1) + 8, 1e-8, 800, 5,
                                              -1e-6);
  HolomorphicBasis out;
  out.k = k;
  out.dimension = d;
  out.method = "finite-element";
  for (int i = 0; i <= d; ++i) out.singular_values.push_back(std::sqrt(std::max(ep.values[2 * i], 0.0)));
  out.gap_ratio = out.singular_values[d] / std::max(out.singular_values[d - 1], 1e-300);
  if (require_gap && !(out.gap_ratio >= kGapRatio)) {
    std::ostringstream os;
    os << "discretization too coarse: finite-element singular-value gap " << out.gap_ratio << " < "
       << kGapRatio << "; smallest singular values:";
    for (double s : out.singular_values) os << ' ' << s;
    throw DiscretizationError(os.str());
  }
  const BundleData b = build_bundle(mesh, k);
  for (int j = 0; j < 2 * d && static_cast<int>(out.sampled.size()) < d; ++j) {
    const Eigen::VectorXcd x = linalg::complexify(ep.vectors.col(j));
    Eigen::VectorXcd a(kb.n_faces());
    for (int f = 0; f < kb.n_faces(); ++f) {
      cplx s = 0.0;
      for (int i = 0; i < 3; ++i) {
        s += std::polar(1.0, kb.power * kb.face_frame[f][i]) * x[mesh.faces[f][i]];
      }
      a[f] = s / 3.0;
    }
    // Keep only directions independent of those already collected.
    Eigen::VectorXcd r = a;
    for (const auto& e : out.sampled) r -= e * (form_inner(b, e, r) / form_inner(b, e, e));
    if (form_norm(b, r) > 1e-6 * form_norm(b, a)) out.sampled.push_back(r);
  }
  finish_basis(b, out);
  return out;
}

}  // namespace hyperdon::bundle
