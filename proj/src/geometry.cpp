#include "hyperdon/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hyperdon/errors.hpp"

namespace hyperdon::geometry {

namespace {

constexpr double kPi = std::numbers::pi;

cplx mobius(cplx a, cplx z) { return (z - a) / (1.0 - std::conj(a) * z); }
cplx mobius_inv(cplx a, cplx w) { return (w + a) / (1.0 + std::conj(a) * w); }

// Hyperbolic corner angle opposite side a in a triangle with sides a, b, c.
double corner_angle_from_sides(double a, double b, double c) {
  const double s = 0.5 * (a + b + c);
  const double num = std::sinh(s - b) * std::sinh(s - c);
  const double den = std::sinh(s) * std::sinh(s - a);
  return 2.0 * std::atan2(std::sqrt(num), std::sqrt(den));
}

double area_from_sides(double a, double b, double c) {
  const double s = 0.5 * (a + b + c);
  const double p = std::tanh(0.5 * s) * std::tanh(0.5 * (s - a)) * std::tanh(0.5 * (s - b)) *
                   std::tanh(0.5 * (s - c));
  return 4.0 * std::atan(std::sqrt(p));
}

}  // namespace

double HyperbolicMesh::total_area() const {
  double s = 0.0;
  for (double a : face_area) s += a;
  return s;
}

double HyperbolicMesh::max_edge_length() const {
  double m = 0.0;
  for (double l : edge_length) m = std::max(m, l);
  return m;
}

double disk_distance(cplx a, cplx b) { return 2.0 * std::atanh(std::abs(mobius(a, b))); }

cplx disk_point_on_geodesic(cplx a, cplx b, double fraction) {
  const cplx w = mobius(a, b);
  const double r = std::abs(w);
  if (r == 0.0) return a;
  const double d = 2.0 * std::atanh(r);
  const cplx x = std::tanh(0.5 * fraction * d) * (w / r);
  return mobius_inv(a, x);
}

cplx disk_midpoint(cplx a, cplx b) { return disk_point_on_geodesic(a, b, 0.5); }

double disk_transport_angle(cplx a, cplx b) {
  return -2.0 * std::arg(1.0 + std::conj(a) * mobius(a, b));
}

HyperbolicMesh build_mesh(int genus, int n_vertices, const std::vector<std::array<int, 3>>& faces,
                          const std::map<EdgeKey, double>& lengths) {
  HyperbolicMesh m;
  m.genus = genus;
  m.n_vertices = n_vertices;
  m.faces = faces;
  const int F = m.n_faces();
  const int H = 3 * F;

  std::ostringstream bad;
  for (int f = 0; f < F; ++f) {
    const auto& t = faces[f];
    for (int i = 0; i < 3; ++i) {
      if (t[i] < 0 || t[i] >= n_vertices) bad << " face " << f << " has vertex out of range;";
    }
    if (t[0] == t[1] || t[1] == t[2] || t[2] == t[0]) bad << " face " << f << " is degenerate;";
  }
  if (!bad.str().empty()) throw StructuralError("non-manifold mesh:" + bad.str());

  std::map<EdgeKey, int> directed;
  for (int h = 0; h < H; ++h) {
    const EdgeKey key{m.tail(h), m.head(h)};
    auto [it, inserted] = directed.emplace(key, h);
    if (!inserted) {
      bad << " directed edge (" << key.first << "," << key.second << ") in faces " << it->second / 3
          << " and " << h / 3 << ";";
    }
  }
  m.twin.assign(H, -1);
  for (int h = 0; h < H; ++h) {
    auto it = directed.find({m.head(h), m.tail(h)});
    if (it == directed.end()) {
      bad << " boundary edge (" << m.tail(h) << "," << m.head(h) << ") in face " << h / 3 << ";";
    } else {
      m.twin[h] = it->second;
    }
  }
  if (!bad.str().empty()) throw StructuralError("non-manifold mesh:" + bad.str());

  m.edge_of.assign(H, -1);
  for (int h = 0; h < H; ++h) {
    if (m.edge_of[h] >= 0) continue;
    const int e = static_cast<int>(m.edges.size());
    m.edges.push_back({std::min(m.tail(h), m.head(h)), std::max(m.tail(h), m.head(h))});
    m.edge_of[h] = e;
    m.edge_of[m.twin[h]] = e;
  }

  m.vertex_halfedge.assign(n_vertices, -1);
  std::vector<int> outgoing(n_vertices, 0);
  for (int h = 0; h < H; ++h) {
    const int v = m.tail(h);
    ++outgoing[v];
    if (m.vertex_halfedge[v] < 0) m.vertex_halfedge[v] = h;
  }
  for (int v = 0; v < n_vertices; ++v) {
    if (m.vertex_halfedge[v] < 0) {
      bad << " isolated vertex " << v << ";";
      continue;
    }
    int count = 0;
    int h = m.vertex_halfedge[v];
    do {
      ++count;
      h = m.twin[HyperbolicMesh::prev(h)];
    } while (h != m.vertex_halfedge[v] && count <= outgoing[v]);
    if (count != outgoing[v]) bad << " vertex " << v << " has a non-disk link;";
  }
  if (!bad.str().empty()) throw StructuralError("non-manifold mesh:" + bad.str());

  m.edge_length.resize(m.n_edges());
  for (int e = 0; e < m.n_edges(); ++e) {
    auto it = lengths.find(m.edges[e]);
    if (it == lengths.end()) {
      throw StructuralError("missing edge length for (" + std::to_string(m.edges[e].first) + "," +
                            std::to_string(m.edges[e].second) + ")");
    }
    m.edge_length[e] = it->second;
  }

  m.corner_angle.assign(F, {0.0, 0.0, 0.0});
  m.face_area.assign(F, 0.0);
  m.face_valid.assign(F, true);
  for (int f = 0; f < F; ++f) {
    std::array<double, 3> side;  // side[i] is opposite corner i
    for (int i = 0; i < 3; ++i) side[i] = m.edge_length[m.edge_of[3 * f + (i + 1) % 3]];
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      if (!(side[i] > 0.0) || side[i] >= side[(i + 1) % 3] + side[(i + 2) % 3]) ok = false;
    }
    m.face_valid[f] = ok;
    if (!ok) continue;
    for (int i = 0; i < 3; ++i) {
      m.corner_angle[f][i] = corner_angle_from_sides(side[i], side[(i + 1) % 3], side[(i + 2) % 3]);
    }
    m.face_area[f] = area_from_sides(side[0], side[1], side[2]);
  }

  m.angle_sum.assign(n_vertices, 0.0);
  m.vertex_weight.assign(n_vertices, 0.0);
  for (int f = 0; f < F; ++f) {
    for (int i = 0; i < 3; ++i) {
      m.angle_sum[faces[f][i]] += m.corner_angle[f][i];
      m.vertex_weight[faces[f][i]] += m.face_area[f] / 3.0;
    }
  }

  m.halfedge_angle.assign(H, 0.0);
  for (int v = 0; v < n_vertices; ++v) {
    const double scale = m.angle_sum[v] > 0.0 ? 2.0 * kPi / m.angle_sum[v] : 1.0;
    double a = 0.0;
    int h = m.vertex_halfedge[v];
    do {
      m.halfedge_angle[h] = a * scale;
      a += m.corner_angle[h / 3][h % 3];
      h = m.twin[HyperbolicMesh::prev(h)];
    } while (h != m.vertex_halfedge[v]);
  }
  return m;
}

HyperbolicMesh generate_genus2_mesh(int level) {
  if (level < 0 || level > 7) {
    throw ResourceError("generator level " + std::to_string(level) + " outside [0, 7]");
  }
  struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> e;  // e[i] joins corner i and corner i+1
    std::array<cplx, 3> z;
  };

  // Regular octagon with interior angles π/4: cosh R = cot²(π/8) for the
  // circumradius, cosh ρ = cot(π/8) for the inradius (= half side length).
  const double cot8 = 1.0 / std::tan(kPi / 8.0);
  const double r_corner = std::tanh(0.5 * std::acosh(cot8 * cot8));
  const double r_mid = std::tanh(0.5 * std::acosh(cot8));
  std::array<cplx, 8> corner, mid;
  for (int j = 0; j < 8; ++j) {
    corner[j] = std::polar(r_corner, kPi * j / 4.0);
    mid[j] = std::polar(r_mid, kPi * j / 4.0 + kPi / 8.0);
  }

  // Side j is glued to side j+4 reversed, so all corners are one vertex and
  // mid[j] ~ mid[j+4].
  auto spoke = [](int j) { return j % 8; };
  auto tmid = [](int j) { return 8 + j % 8; };
  auto half_a = [](int j) { return 16 + j % 8; };
  auto half_b = [](int j) { return 16 + (j + 4) % 8; };
  std::vector<Tri> tris;
  for (int j = 0; j < 8; ++j) {
    const int mv = 2 + j % 4;
    tris.push_back({{0, 1, mv}, {spoke(j), half_a(j), tmid(j)}, {0.0, corner[j], mid[j]}});
    tris.push_back(
        {{0, mv, 1}, {tmid(j), half_b(j), spoke(j + 1)}, {0.0, mid[j], corner[(j + 1) % 8]}});
  }
  int nv = 6;
  int ne = 24;

  for (int step = 0; step <= level; ++step) {
    std::vector<int> mid_vertex(ne, -1);
    std::map<std::pair<int, int>, int> half;
    int next_edge = 0;
    auto half_edge = [&](int e, int endpoint) {
      auto [it, inserted] = half.emplace(std::make_pair(e, endpoint), next_edge);
      if (inserted) ++next_edge;
      return it->second;
    };
    std::vector<Tri> out;
    out.reserve(4 * tris.size());
    for (const Tri& t : tris) {
      std::array<int, 3> mv;
      std::array<cplx, 3> mz;
      for (int i = 0; i < 3; ++i) {
        if (mid_vertex[t.e[i]] < 0) mid_vertex[t.e[i]] = nv++;
        mv[i] = mid_vertex[t.e[i]];
        mz[i] = disk_midpoint(t.z[i], t.z[(i + 1) % 3]);
      }
      // mv[i] sits on the side from corner i to corner i+1.
      const int n01 = next_edge++, n12 = next_edge++, n20 = next_edge++;
      // n01 joins mv[0], mv[2]; n12 joins mv[1], mv[0]; n20 joins mv[2], mv[1].
      out.push_back({{t.v[0], mv[0], mv[2]},
                     {half_edge(t.e[0], t.v[0]), n01, half_edge(t.e[2], t.v[0])},
                     {t.z[0], mz[0], mz[2]}});
      out.push_back({{t.v[1], mv[1], mv[0]},
                     {half_edge(t.e[1], t.v[1]), n12, half_edge(t.e[0], t.v[1])},
                     {t.z[1], mz[1], mz[0]}});
      out.push_back({{t.v[2], mv[2], mv[1]},
                     {half_edge(t.e[2], t.v[2]), n20, half_edge(t.e[1], t.v[2])},
                     {t.z[2], mz[2], mz[1]}});
      out.push_back({{mv[0], mv[1], mv[2]}, {n12, n20, n01}, {mz[0], mz[1], mz[2]}});
    }
    tris = std::move(out);
    ne = next_edge;
  }

  std::vector<std::array<int, 3>> faces;
  std::vector<std::array<cplx, 3>> disk;
  std::map<EdgeKey, double> lengths;
  faces.reserve(tris.size());
  disk.reserve(tris.size());
  for (const Tri& t : tris) {
    faces.push_back(t.v);
    disk.push_back(t.z);
    for (int i = 0; i < 3; ++i) {
      const int a = t.v[i], b = t.v[(i + 1) % 3];
      const double len = disk_distance(t.z[i], t.z[(i + 1) % 3]);
      auto [it, inserted] = lengths.emplace(EdgeKey{std::min(a, b), std::max(a, b)}, len);
      if (!inserted && std::abs(it->second - len) > 1e-11 * len) {
        throw NumericalError("generator produced inconsistent glued edge lengths");
      }
    }
  }
  HyperbolicMesh m = build_mesh(2, nv, faces, lengths);
  m.disk = std::move(disk);
  m.generated = true;
  m.level = level;
  return m;
}

MeshReport validate_mesh(const HyperbolicMesh& mesh, bool loaded) {
  MeshReport r;
  const double two_pi = 2.0 * kPi;
  r.euler = mesh.euler_characteristic();
  r.euler_ok = r.euler == 2 - 2 * mesh.genus;
  if (!r.euler_ok) {
    r.messages.push_back("Euler characteristic " + std::to_string(r.euler) + " != " +
                         std::to_string(2 - 2 * mesh.genus));
  }
  for (int f = 0; f < mesh.n_faces(); ++f) {
    if (!mesh.face_valid[f] || !(mesh.face_area[f] > 0.0)) r.bad_faces.push_back(f);
  }
  r.triangle_ok = r.bad_faces.empty();
  if (!r.triangle_ok) {
    r.messages.push_back("triangle inequality or positive area fails on " +
                         std::to_string(r.bad_faces.size()) + " face(s), first " +
                         std::to_string(r.bad_faces.front()));
  }
  for (int v = 0; v < mesh.n_vertices; ++v) {
    r.worst_angle_defect = std::max(r.worst_angle_defect, std::abs(mesh.angle_sum[v] - two_pi));
  }
  const double target = 4.0 * kPi * (mesh.genus - 1);
  r.area_mismatch = std::abs(mesh.total_area() - target);
  if (!loaded) {
    r.angle_ok = r.worst_angle_defect <= 1e-9;
    r.area_ok = r.area_mismatch <= 1e-8;
  } else {
    r.angle_ok = r.worst_angle_defect <= 1e-1;
    r.angle_warning = r.angle_ok && r.worst_angle_defect > 1e-3;
    r.area_ok = r.area_mismatch <= 1e-1 * target;
  }
  std::ostringstream os;
  os.precision(3);
  if (!r.angle_ok) {
    os << "angle-sum defect " << r.worst_angle_defect << " exceeds tolerance";
    r.messages.push_back(os.str());
  } else if (r.angle_warning) {
    os << "warning: angle-sum defect " << r.worst_angle_defect << " above 1e-3";
    r.messages.push_back(os.str());
  }
  if (!r.area_ok) {
    std::ostringstream oa;
    oa.precision(3);
    oa << "total area off from 4π(g-1) by " << r.area_mismatch;
    r.messages.push_back(oa.str());
  }
  return r;
}

std::array<double, 3> chart_angles(const HyperbolicMesh& mesh, int f) {
  const double third = mesh.face_area[f] / 3.0;
  return {mesh.corner_angle[f][0] + third, mesh.corner_angle[f][1] + third,
          mesh.corner_angle[f][2] + third};
}

std::array<cplx, 3> face_chart(const HyperbolicMesh& mesh, int f) {
  if (!mesh.face_valid[f]) {
    throw NumericalError("degenerate triangle " + std::to_string(f) + " in assembly");
  }
  const auto th = chart_angles(mesh, f);
  const double s0 = std::sin(th[0]), s1 = std::sin(th[1]), s2 = std::sin(th[2]);
  const double R = std::sqrt(mesh.face_area[f] / (2.0 * s0 * s1 * s2));
  return {cplx(0.0, 0.0), cplx(2.0 * R * s2, 0.0), std::polar(2.0 * R * s1, th[0])};
}

Eigen::SparseMatrix<double> dirichlet_matrix(const HyperbolicMesh& mesh) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(12 * mesh.n_faces());
  for (int f = 0; f < mesh.n_faces(); ++f) {
    if (!mesh.face_valid[f]) {
      throw NumericalError("degenerate triangle " + std::to_string(f) + " in assembly");
    }
    const auto th = chart_angles(mesh, f);
    for (int i = 0; i < 3; ++i) {
      const double w = 0.5 / std::tan(th[i]);
      const int a = mesh.faces[f][(i + 1) % 3], b = mesh.faces[f][(i + 2) % 3];
      trip.emplace_back(a, a, w);
      trip.emplace_back(b, b, w);
      trip.emplace_back(a, b, -w);
      trip.emplace_back(b, a, -w);
    }
  }
  Eigen::SparseMatrix<double> K(mesh.n_vertices, mesh.n_vertices);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

double laplacian_quadratic_form(const HyperbolicMesh& mesh, const Eigen::VectorXd& v1,
                                const Eigen::VectorXd& v2) {
  if (v1.size() != mesh.n_vertices || v2.size() != mesh.n_vertices) {
    throw DomainError("scalar field size does not match mesh");
  }
  double s = 0.0;
  for (int f = 0; f < mesh.n_faces(); ++f) {
    if (!mesh.face_valid[f]) {
      throw NumericalError("degenerate triangle " + std::to_string(f) + " in assembly");
    }
    const auto th = chart_angles(mesh, f);
    for (int i = 0; i < 3; ++i) {
      const int a = mesh.faces[f][(i + 1) % 3], b = mesh.faces[f][(i + 2) % 3];
      s += 0.5 / std::tan(th[i]) * (v1[a] - v1[b]) * (v2[a] - v2[b]);
    }
  }
  return s;
}

double integrate(const HyperbolicMesh& mesh, const Eigen::VectorXd& f) {
  if (f.size() != mesh.n_vertices) throw DomainError("scalar field size does not match mesh");
  double s = 0.0;
  for (int v = 0; v < mesh.n_vertices; ++v) s += mesh.vertex_weight[v] * f[v];
  return s;
}

Eigen::VectorXd vertex_weights(const HyperbolicMesh& mesh) {
  return Eigen::Map<const Eigen::VectorXd>(mesh.vertex_weight.data(), mesh.n_vertices);
}

Eigen::VectorXd face_areas(const HyperbolicMesh& mesh) {
  return Eigen::Map<const Eigen::VectorXd>(mesh.face_area.data(), mesh.n_faces());
}

Eigen::SparseMatrix<double> face_average_matrix(const HyperbolicMesh& mesh) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(3 * mesh.n_faces());
  for (int f = 0; f < mesh.n_faces(); ++f) {
    for (int i = 0; i < 3; ++i) trip.emplace_back(f, mesh.faces[f][i], 1.0 / 3.0);
  }
  Eigen::SparseMatrix<double> P(mesh.n_faces(), mesh.n_vertices);
  P.setFromTriplets(trip.begin(), trip.end());
  return P;
}

Eigen::VectorXd face_mean(const HyperbolicMesh& mesh, const Eigen::VectorXd& v) {
  Eigen::VectorXd out(mesh.n_faces());
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const auto& t = mesh.faces[f];
    out[f] = (v[t[0]] + v[t[1]] + v[t[2]]) / 3.0;
  }
  return out;
}

std::vector<cplx> vertex_disk_positions(const HyperbolicMesh& mesh) {
  if (mesh.disk.empty()) throw DomainError("mesh carries no disk coordinates");
  std::vector<cplx> pos(mesh.n_vertices);
  std::vector<bool> seen(mesh.n_vertices, false);
  for (int f = 0; f < mesh.n_faces(); ++f) {
    for (int i = 0; i < 3; ++i) {
      const int v = mesh.faces[f][i];
      if (!seen[v]) {
        seen[v] = true;
        pos[v] = mesh.disk[f][i];
      }
    }
  }
  return pos;
}

}  // namespace hyperdon::geometry
