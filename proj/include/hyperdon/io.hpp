#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hyperdon/analysis.hpp"
#include "hyperdon/applications.hpp"
#include "hyperdon/geometry.hpp"
#include "hyperdon/solver.hpp"

namespace hyperdon::io {

using json = nlohmann::ordered_json;

inline constexpr int kFrameVersion = 1;

// Keys: genus, vertices, faces, edge_lengths ("i,j" with i < j). Generated
// meshes also carry generator_level and disk_corners so a reload keeps the
// spectral holomorphic basis.
json mesh_to_json(const geometry::HyperbolicMesh& mesh);
geometry::HyperbolicMesh mesh_from_json(const json& j);
void save_mesh(const std::string& path, const geometry::HyperbolicMesh& mesh);
geometry::HyperbolicMesh load_mesh(const std::string& path);

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::string& path);
std::string mesh_hash(const geometry::HyperbolicMesh& mesh);

struct FieldHeader {
  std::string kind;      // "section", "form", "k-differential", "scalar"
  std::string location;  // "vertex" or "face"
  std::string mesh_hash;
  int k = 0;
  int frame_version = kFrameVersion;
};

// Complex fields are stored as arrays of [re, im] pairs, real fields as numbers.
json field_to_json(const FieldHeader& h, const Eigen::VectorXcd& x);
json field_to_json(const FieldHeader& h, const Eigen::VectorXd& x);
Eigen::VectorXcd complex_field_from_json(const json& j, FieldHeader* h = nullptr);
Eigen::VectorXd real_field_from_json(const json& j, FieldHeader* h = nullptr);

json solution_to_json(const solver::Solution& s, const std::string& mesh_hash);
solver::Solution solution_from_json(const json& j, std::string* mesh_hash = nullptr);

json certification_to_json(const analysis::CertificationReport& r);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);
void write_json(const std::string& path, const json& j);
json read_json(const std::string& path);

// Sweep CSV with columns t, D, sup_u, res_u, res_eta, iters, converged; reals
// printed with 17 significant digits.
std::string sweep_csv(const std::vector<solver::SweepPoint>& points);
std::vector<solver::SweepPoint> parse_sweep_csv(const std::string& text);

std::string fixedq_csv(const applications::FixedQResult& r);
std::string immersion_csv(const applications::ImmersionData& d);

std::string format_real(double x);

}  // namespace hyperdon::io
