#include "hyperdon/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "hyperdon/errors.hpp"

namespace hyperdon::io {

namespace {

using geometry::cplx;

json pair_of(cplx z) { return json::array({z.real(), z.imag()}); }

cplx cplx_of(const json& p) {
  if (!p.is_array() || p.size() != 2) throw StructuralError("expected [re, im] pair");
  return {p[0].get<double>(), p[1].get<double>()};
}

json complex_array(const Eigen::VectorXcd& x) {
  json a = json::array();
  for (int i = 0; i < x.size(); ++i) a.push_back(pair_of(x[i]));
  return a;
}

Eigen::VectorXcd complex_vector(const json& a) {
  Eigen::VectorXcd x(a.size());
  for (size_t i = 0; i < a.size(); ++i) x[i] = cplx_of(a[i]);
  return x;
}

json real_array(const Eigen::VectorXd& x) {
  json a = json::array();
  for (int i = 0; i < x.size(); ++i) a.push_back(x[i]);
  return a;
}

Eigen::VectorXd real_vector(const json& a) {
  Eigen::VectorXd x(a.size());
  for (size_t i = 0; i < a.size(); ++i) x[i] = a[i].get<double>();
  return x;
}

std::string edge_key(int a, int b) { return std::to_string(a) + "," + std::to_string(b); }

}  // namespace

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json mesh_to_json(const geometry::HyperbolicMesh& mesh) {
  json j;
  j["genus"] = mesh.genus;
  j["vertices"] = mesh.n_vertices;
  json faces = json::array();
  for (const auto& f : mesh.faces) faces.push_back({f[0], f[1], f[2]});
  j["faces"] = std::move(faces);
  json lengths = json::object();
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const auto [a, b] = mesh.edges[e];
    lengths[edge_key(std::min(a, b), std::max(a, b))] = mesh.edge_length[e];
  }
  j["edge_lengths"] = std::move(lengths);
  if (mesh.generated) j["generator_level"] = mesh.level;
  if (!mesh.disk.empty()) {
    json corners = json::array();
    for (const auto& c : mesh.disk) corners.push_back({pair_of(c[0]), pair_of(c[1]), pair_of(c[2])});
    j["disk_corners"] = std::move(corners);
  }
  return j;
}

geometry::HyperbolicMesh mesh_from_json(const json& j) {
  try {
    const int genus = j.at("genus").get<int>();
    const int nv = j.at("vertices").get<int>();
    std::vector<std::array<int, 3>> faces;
    for (const auto& f : j.at("faces")) {
      if (f.size() != 3) throw StructuralError("face with " + std::to_string(f.size()) + " vertices");
      std::array<int, 3> t{f[0].get<int>(), f[1].get<int>(), f[2].get<int>()};
      for (int v : t)
        if (v < 0 || v >= nv) throw StructuralError("face index " + std::to_string(v) + " out of range");
      faces.push_back(t);
    }
    std::map<geometry::EdgeKey, double> lengths;
    for (const auto& [key, val] : j.at("edge_lengths").items()) {
      const auto comma = key.find(',');
      if (comma == std::string::npos) throw StructuralError("bad edge key '" + key + "'");
      int a = std::stoi(key.substr(0, comma)), b = std::stoi(key.substr(comma + 1));
      if (a > b) std::swap(a, b);
      const double len = val.get<double>();
      if (!(len > 0.0)) throw StructuralError("nonpositive length on edge " + key);
      lengths[{a, b}] = len;
    }
    for (const auto& f : faces)
      for (int i = 0; i < 3; ++i) {
        const int a = std::min(f[i], f[(i + 1) % 3]), b = std::max(f[i], f[(i + 1) % 3]);
        if (!lengths.count({a, b})) throw StructuralError("missing length for edge " + edge_key(a, b));
      }

    std::vector<std::array<cplx, 3>> disk;
    if (j.contains("disk_corners")) {
      for (const auto& c : j["disk_corners"]) disk.push_back({cplx_of(c[0]), cplx_of(c[1]), cplx_of(c[2])});
      if (disk.size() != faces.size()) throw StructuralError("disk_corners does not match faces");
    }
    // A file written from the generator is accepted as generated only if it
    // reproduces the generator output exactly.
    if (j.contains("generator_level") && genus == 2) {
      const int level = j["generator_level"].get<int>();
      if (level >= 0 && level <= 6) {
        auto g = geometry::generate_genus2_mesh(level);
        bool same = g.n_vertices == nv && g.faces == faces && g.disk == disk;
        for (int e = 0; same && e < g.n_edges(); ++e) {
          const auto it = lengths.find(g.edges[e]);
          same = it != lengths.end() && it->second == g.edge_length[e];
        }
        if (same && lengths.size() == static_cast<size_t>(g.n_edges())) return g;
      }
    }
    auto m = geometry::build_mesh(genus, nv, faces, lengths);
    m.disk = std::move(disk);
    return m;
  } catch (const json::exception& e) {
    throw StructuralError(std::string("mesh file: ") + e.what());
  }
}

void save_mesh(const std::string& path, const geometry::HyperbolicMesh& mesh) { write_json(path, mesh_to_json(mesh)); }

geometry::HyperbolicMesh load_mesh(const std::string& path) { return mesh_from_json(read_json(path)); }

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
    throw ResourceError("sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_text(path)); }

std::string mesh_hash(const geometry::HyperbolicMesh& mesh) { return sha256_hex(mesh_to_json(mesh).dump()); }

json field_to_json(const FieldHeader& h, const Eigen::VectorXcd& x) {
  json j;
  j["kind"] = h.kind;
  j["location"] = h.location;
  j["mesh_hash"] = h.mesh_hash;
  j["k"] = h.k;
  j["frame_version"] = h.frame_version;
  j["values"] = complex_array(x);
  return j;
}

json field_to_json(const FieldHeader& h, const Eigen::VectorXd& x) {
  json j = field_to_json(h, Eigen::VectorXcd());
  j["values"] = real_array(x);
  return j;
}

namespace {
void read_header(const json& j, FieldHeader* h) {
  if (j.value("frame_version", -1) != kFrameVersion)
    throw StructuralError("unsupported frame convention version " + std::to_string(j.value("frame_version", -1)));
  if (!h) return;
  h->kind = j.at("kind").get<std::string>();
  h->location = j.at("location").get<std::string>();
  h->mesh_hash = j.at("mesh_hash").get<std::string>();
  h->k = j.at("k").get<int>();
  h->frame_version = j.at("frame_version").get<int>();
}
}  // namespace

Eigen::VectorXcd complex_field_from_json(const json& j, FieldHeader* h) {
  try {
    read_header(j, h);
    return complex_vector(j.at("values"));
  } catch (const json::exception& e) {
    throw StructuralError(std::string("field file: ") + e.what());
  }
}

Eigen::VectorXd real_field_from_json(const json& j, FieldHeader* h) {
  try {
    read_header(j, h);
    return real_vector(j.at("values"));
  } catch (const json::exception& e) {
    throw StructuralError(std::string("field file: ") + e.what());
  }
}

json solution_to_json(const solver::Solution& s, const std::string& mesh_hash) {
  json j;
  j["kind"] = "solution";
  j["mesh_hash"] = mesh_hash;
  j["k"] = s.k;
  j["frame_version"] = kFrameVersion;
  j["D"] = s.D_value;
  j["D_initial"] = s.D_initial;
  j["residual_u"] = s.residual_u;
  j["residual_eta"] = s.residual_eta;
  j["iterations"] = s.iterations;
  j["converged"] = s.converged;
  j["regularization"] = s.regularization;
  j["u"] = real_array(s.u);
  j["eta"] = complex_array(s.eta);
  j["eta_input"] = complex_array(s.eta_input);
  j["beta0"] = complex_array(s.beta0);
  j["history"] = s.history;
  return j;
}

solver::Solution solution_from_json(const json& j, std::string* hash) {
  try {
    read_header(j, nullptr);
    solver::Solution s;
    s.k = j.at("k").get<int>();
    s.D_value = j.at("D").get<double>();
    s.D_initial = j.at("D_initial").get<double>();
    s.residual_u = j.at("residual_u").get<double>();
    s.residual_eta = j.at("residual_eta").get<double>();
    s.iterations = j.at("iterations").get<int>();
    s.converged = j.at("converged").get<bool>();
    s.regularization = j.at("regularization").get<double>();
    s.u = real_vector(j.at("u"));
    s.eta = complex_vector(j.at("eta"));
    s.eta_input = complex_vector(j.at("eta_input"));
    s.beta0 = complex_vector(j.at("beta0"));
    s.history = j.at("history").get<std::vector<double>>();
    if (hash) *hash = j.at("mesh_hash").get<std::string>();
    return s;
  } catch (const json::exception& e) {
    throw StructuralError(std::string("solution file: ") + e.what());
  }
}

json certification_to_json(const analysis::CertificationReport& r) {
  json j;
  j["passed"] = r.passed();
  j["sigma"] = r.sigma;
  j["sigma_converged"] = r.sigma_converged;
  j["decomposition_error"] = r.decomposition_error;
  j["remainder_margin"] = r.remainder_margin;
  j["weighted_poincare_margin"] = r.weighted_poincare_margin;
  j["poincare_worst_ratio"] = r.poincare_worst_ratio;
  j["local_min_violations"] = r.local_min_violations;
  j["n_samples"] = r.n_samples;
  j["residual_u"] = r.residual_u;
  j["residual_eta"] = r.residual_eta;
  j["failures"] = r.failures;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ResourceError("cannot write " + path);
  f << text;
  if (!f) throw ResourceError("write failed for " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ResourceError("cannot read " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(1) + "\n"); }

json read_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw StructuralError(path + ": " + e.what());
  }
}

std::string sweep_csv(const std::vector<solver::SweepPoint>& points) {
  std::ostringstream os;
  os << "t,D,sup_u,res_u,res_eta,iters,converged\n";
  for (const auto& p : points)
    os << format_real(p.t) << ',' << format_real(p.D) << ',' << format_real(p.sup_u) << ',' << format_real(p.res_u)
       << ',' << format_real(p.res_eta) << ',' << p.iters << ',' << (p.converged ? 1 : 0) << '\n';
  return os.str();
}

std::vector<solver::SweepPoint> parse_sweep_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  if (line != "t,D,sup_u,res_u,res_eta,iters,converged") throw StructuralError("unexpected sweep CSV header");
  std::vector<solver::SweepPoint> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    if (cells.size() != 7) throw StructuralError("sweep CSV row with " + std::to_string(cells.size()) + " cells");
    solver::SweepPoint p;
    p.t = std::stod(cells[0]);
    p.D = std::stod(cells[1]);
    p.sup_u = std::stod(cells[2]);
    p.res_u = std::stod(cells[3]);
    p.res_eta = std::stod(cells[4]);
    p.iters = std::stoi(cells[5]);
    p.converged = cells[6] == "1";
    out.push_back(p);
  }
  return out;
}

std::string fixedq_csv(const applications::FixedQResult& r) {
  std::ostringstream os;
  os << "t,status,residual,min_eigenvalue,sup_u,min_u\n";
  for (size_t i = 0; i < r.t_grid.size(); ++i) {
    const bool ok = r.status[i] == "ok";
    os << format_real(r.t_grid[i]) << ',' << r.status[i] << ',' << format_real(r.residual[i]) << ','
       << format_real(r.min_eigenvalue[i]) << ',' << (ok ? format_real(r.u_branch[i].maxCoeff()) : "nan") << ','
       << (ok ? format_real(r.u_branch[i].minCoeff()) : "nan") << '\n';
  }
  return os.str();
}

std::string immersion_csv(const applications::ImmersionData& d) {
  std::ostringstream os;
  os << "face,lambda1,lambda2,q_re,q_im\n";
  for (int f = 0; f < d.lambda1.size(); ++f)
    os << f << ',' << format_real(d.lambda1[f]) << ',' << format_real(d.lambda2[f]) << ','
       << format_real(d.q[f].real()) << ',' << format_real(d.q[f].imag()) << '\n';
  return os.str();
}

}  // namespace hyperdon::io
