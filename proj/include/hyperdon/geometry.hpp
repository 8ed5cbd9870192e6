#pragma once

#include <array>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace hyperdon::geometry {

using cplx = std::complex<double>;
using EdgeKey = std::pair<int, int>;

// Triangulated closed surface with intrinsic hyperbolic edge lengths.
// Halfedge h = 3*f + i runs from faces[f][i] to faces[f][(i+1)%3].
struct HyperbolicMesh {
  int genus = 2;
  int n_vertices = 0;
  std::vector<std::array<int, 3>> faces;

  std::vector<int> twin;
  std::vector<int> edge_of;
  std::vector<EdgeKey> edges;
  std::vector<int> vertex_halfedge;  // reference outgoing halfedge

  std::vector<double> edge_length;
  std::vector<std::array<double, 3>> corner_angle;
  std::vector<double> face_area;
  std::vector<double> vertex_weight;
  std::vector<double> angle_sum;
  std::vector<bool> face_valid;
  // Direction of each halfedge at its tail, measured counterclockwise from the
  // tail's reference halfedge. Angles are rescaled so each vertex closes at 2π.
  std::vector<double> halfedge_angle;

  // Poincaré-disk corners of every face in the fundamental domain. Only
  // present for generated meshes.
  std::vector<std::array<cplx, 3>> disk;
  bool generated = false;
  int level = -1;

  int n_faces() const { return static_cast<int>(faces.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_halfedges() const { return 3 * n_faces(); }
  int tail(int h) const { return faces[h / 3][h % 3]; }
  int head(int h) const { return faces[h / 3][(h % 3 + 1) % 3]; }
  static int next(int h) { return 3 * (h / 3) + (h % 3 + 1) % 3; }
  static int prev(int h) { return 3 * (h / 3) + (h % 3 + 2) % 3; }
  int euler_characteristic() const { return n_vertices - n_edges() + n_faces(); }
  double total_area() const;
  double max_edge_length() const;
};

// Build combinatorics and geometry from faces and per-edge lengths. Faces
// that violate the triangle inequality are kept but flagged invalid.
HyperbolicMesh build_mesh(int genus, int n_vertices,
                          const std::vector<std::array<int, 3>>& faces,
                          const std::map<EdgeKey, double>& lengths);

HyperbolicMesh generate_genus2_mesh(int level);

struct MeshReport {
  bool manifold = true;
  bool euler_ok = true;
  int euler = 0;
  bool triangle_ok = true;
  std::vector<int> bad_faces;
  double worst_angle_defect = 0.0;
  bool angle_ok = true;
  bool angle_warning = false;
  double area_mismatch = 0.0;
  bool area_ok = true;
  std::vector<std::string> messages;
  bool passed() const { return manifold && euler_ok && triangle_ok && angle_ok && area_ok; }
};

// loaded=true applies the looser thresholds for meshes read from disk.
MeshReport validate_mesh(const HyperbolicMesh& mesh, bool loaded = false);

// Corner angles of the Euclidean chart of face f: hyperbolic angles plus one
// third of the face area each, so the chart is a flat triangle of equal area.
std::array<double, 3> chart_angles(const HyperbolicMesh& mesh, int f);
std::array<cplx, 3> face_chart(const HyperbolicMesh& mesh, int f);

// Stiffness matrix K with v1^T K v2 the discrete Dirichlet pairing.
Eigen::SparseMatrix<double> dirichlet_matrix(const HyperbolicMesh& mesh);
double laplacian_quadratic_form(const HyperbolicMesh& mesh, const Eigen::VectorXd& v1,
                                const Eigen::VectorXd& v2);
double integrate(const HyperbolicMesh& mesh, const Eigen::VectorXd& f);
Eigen::VectorXd vertex_weights(const HyperbolicMesh& mesh);
Eigen::VectorXd face_areas(const HyperbolicMesh& mesh);

// F x V averaging operator, rows (1/3, 1/3, 1/3).
Eigen::SparseMatrix<double> face_average_matrix(const HyperbolicMesh& mesh);
Eigen::VectorXd face_mean(const HyperbolicMesh& mesh, const Eigen::VectorXd& v);

// Poincaré disk helpers.
double disk_distance(cplx a, cplx b);
cplx disk_midpoint(cplx a, cplx b);
cplx disk_point_on_geodesic(cplx a, cplx b, double fraction);
// Angle change of a tangent vector transported along the geodesic a -> b.
double disk_transport_angle(cplx a, cplx b);

// One representative disk position per vertex (generated meshes only).
std::vector<cplx> vertex_disk_positions(const HyperbolicMesh& mesh);

}  // namespace hyperdon::geometry
