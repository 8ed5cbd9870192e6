#include "hyperdon/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "hyperdon/analysis.hpp"
#include "hyperdon/applications.hpp"
#include "hyperdon/errors.hpp"
#include "hyperdon/io.hpp"
#include "hyperdon/plot.hpp"

namespace hyperdon::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::string command;
  std::string mesh_path;
  int level = 3;
  int k = 2;
  std::string beta = "zero";
  double c = 0.0;
  std::string t_grid = "0:2:10";
  std::string crosscheck_t;
  std::string solution_path;
  std::string output_dir;
  std::string input_dir;
  int samples = 100;
  bool bochner = false;
  std::uint64_t seed = 0;
  bool deterministic = true;
  double grad_tol = 1e-9;
  int max_outer = 200;
  std::string eta_solver = "direct";
};

std::string echo(const RunConfig& c) {
  std::ostringstream os;
  os << "command=" << c.command << "\n";
  if (!c.mesh_path.empty()) os << "mesh=" << c.mesh_path << "\n";
  os << "level=" << c.level << "\nk=" << c.k << "\nbeta=" << c.beta << "\nc=" << io::format_real(c.c)
     << "\nt-grid=" << c.t_grid << "\n";
  if (!c.crosscheck_t.empty()) os << "crosscheck-t=" << c.crosscheck_t << "\n";
  if (!c.solution_path.empty()) os << "solution=" << c.solution_path << "\n";
  if (!c.input_dir.empty()) os << "dir=" << c.input_dir << "\n";
  os << "out=" << c.output_dir << "\nsamples=" << c.samples << "\nbochner=" << (c.bochner ? "true" : "false")
     << "\nseed=" << c.seed << "\ndeterministic=" << (c.deterministic ? "true" : "false")
     << "\ngrad-tol=" << io::format_real(c.grad_tol) << "\nmax-outer=" << c.max_outer
     << "\neta-solver=" << c.eta_solver << "\n";
  return os.str();
}

// Thrown after partial artifacts are written; carries the exit status.
struct Verdict : std::runtime_error {
  int code;
  Verdict(int c, const std::string& w) : std::runtime_error(w), code(c) {}
};

class Run {
 public:
  Run(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {
    if (cfg.output_dir.empty()) throw ConfigError("out is required");
    fs::create_directories(cfg.output_dir);
    manifest_["command"] = cfg.command;
    manifest_["config"] = echo(cfg);
    manifest_["versions"] = {{"hyperdon", kVersion},
                             {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                           std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                           std::to_string(EIGEN_MINOR_VERSION)},
                             {"frame_version", io::kFrameVersion}};
    manifest_["results"] = json::object();
    manifest_["outputs"] = json::array();
  }

  std::string path(const std::string& name) const { return (fs::path(cfg_.output_dir) / name).string(); }

  void emit(const std::string& name, const std::string& text) {
    io::write_text(path(name), text);
    manifest_["outputs"].push_back({{"file", name}, {"sha256", io::sha256_hex(text)}});
  }
  void emit(const std::string& name, const json& j) { emit(name, j.dump(1) + "\n"); }

  json& results() { return manifest_["results"]; }
  void note(const std::string& s) {
    if (!manifest_.contains("notes")) manifest_["notes"] = json::array();
    manifest_["notes"].push_back(s);
  }

  const geometry::HyperbolicMesh& mesh() {
    if (!mesh_) {
      if (!cfg_.mesh_path.empty()) {
        mesh_ = std::make_unique<geometry::HyperbolicMesh>(io::load_mesh(cfg_.mesh_path));
        const auto rep = geometry::validate_mesh(*mesh_, !mesh_->generated);
        if (!rep.passed()) {
          std::string msg = "mesh validation failed:";
          for (const auto& m : rep.messages) msg += " " + m + ";";
          throw StructuralError(msg);
        }
      } else {
        if (cfg_.level < 0 || cfg_.level > 6) throw ConfigError("level must be in 0..6");
        mesh_ = std::make_unique<geometry::HyperbolicMesh>(geometry::generate_genus2_mesh(cfg_.level));
      }
      hash_ = io::mesh_hash(*mesh_);
      manifest_["mesh_hash"] = hash_;
      manifest_["mesh"] = {{"vertices", mesh_->n_vertices}, {"faces", mesh_->n_faces()},
                           {"generated", mesh_->generated}, {"level", mesh_->level}};
    }
    return *mesh_;
  }
  const std::string& hash() {
    mesh();
    return hash_;
  }

  const functional::Problem& problem() {
    if (!problem_) {
      if (cfg_.k < 2) throw ConfigError("k must be >= 2");
      bundle_ = std::make_unique<bundle::BundleData>(bundle::build_bundle(mesh(), cfg_.k));
      problem_ = std::make_unique<functional::Problem>(*bundle_);
    }
    return *problem_;
  }

  const bundle::HolomorphicBasis& basis() {
    if (!basis_) basis_ = std::make_unique<bundle::HolomorphicBasis>(bundle::holomorphic_basis(mesh(), cfg_.k));
    return *basis_;
  }

  solver::SolveOptions options() const {
    solver::SolveOptions o;
    o.grad_tol = cfg_.grad_tol;
    o.max_outer = cfg_.max_outer;
    o.seed = cfg_.seed;
    o.deterministic = cfg_.deterministic;
    if (cfg_.eta_solver == "direct") o.eta_solver = functional::LinearSolver::Direct;
    else if (cfg_.eta_solver == "cg") o.eta_solver = functional::LinearSolver::ConjugateGradient;
    else throw ConfigError("eta-solver must be direct or cg");
    solver::validate(o);
    return o;
  }

  // Face field named by the beta spec: zero, basis:i, basis:i,t, or a field file.
  // as_differential returns the basis element itself instead of ∗⁻¹ of it.
  Eigen::VectorXcd beta_field(bool as_differential = false) {
    const std::string& s = cfg_.beta;
    const int F = mesh().n_faces();
    if (s == "zero") return Eigen::VectorXcd::Zero(F);
    if (s.rfind("basis:", 0) == 0) {
      const std::string rest = s.substr(6);
      const auto comma = rest.find(',');
      int i;
      double t = 1.0;
      try {
        i = std::stoi(rest.substr(0, comma));
        if (comma != std::string::npos) t = std::stod(rest.substr(comma + 1));
      } catch (const std::exception&) {
        throw ConfigError("bad beta spec '" + s + "'");
      }
      const auto& b = basis();
      if (i < 0 || i >= b.dimension)
        throw ConfigError("basis index " + std::to_string(i) + " outside 0.." + std::to_string(b.dimension - 1));
      return t * (as_differential ? b.elements[i] : bundle::hodge_star_inv(b.elements[i]));
    }
    io::FieldHeader h;
    const Eigen::VectorXcd x = io::complex_field_from_json(io::read_json(s), &h);
    if (h.mesh_hash != hash()) throw ConfigError("field file " + s + " belongs to a different mesh");
    if (h.k != cfg_.k) throw ConfigError("field file " + s + " has k = " + std::to_string(h.k));
    if (x.size() != F) throw ConfigError("field file " + s + " has the wrong length");
    if (as_differential != (h.kind == "k-differential"))
      throw ConfigError("field file " + s + " has kind " + h.kind);
    return x;
  }

  void field_plot(const std::string& name, const Eigen::VectorXd& v, const std::string& title) {
    const auto p = plot::field_svg(mesh(), v, title);
    if (p) emit(name, p->svg);
    else note(name + " skipped: mesh has no disk layout");
  }

  void finish(double seconds) {
    io::write_json(path("manifest.json"), manifest_);
    io::write_json(path("timing.json"), json{{"wall_seconds", seconds}});
  }

  const RunConfig& cfg() const { return cfg_; }
  std::ostream& out() { return out_; }

 private:
  const RunConfig& cfg_;
  std::ostream& out_;
  json manifest_;
  std::string hash_;
  std::unique_ptr<geometry::HyperbolicMesh> mesh_;
  std::unique_ptr<bundle::BundleData> bundle_;
  std::unique_ptr<functional::Problem> problem_;
  std::unique_ptr<bundle::HolomorphicBasis> basis_;
};

json solution_summary(const solver::Solution& s) {
  return {{"D", s.D_value},           {"D_initial", s.D_initial},   {"sup_u", s.u.maxCoeff()},
          {"inf_u", s.u.minCoeff()},  {"residual_u", s.residual_u}, {"residual_eta", s.residual_eta},
          {"iterations", s.iterations}, {"converged", s.converged}, {"regularization", s.regularization}};
}

void emit_solution(Run& r, const functional::Problem& pr, const solver::Solution& s) {
  r.emit("solution.json", io::solution_to_json(s, r.hash()));
  r.emit("u.json", io::field_to_json({"scalar", "vertex", r.hash(), pr.k}, s.u));
  const Eigen::VectorXcd q = solver::k_differential(pr, s);
  r.emit("q.json", io::field_to_json({"k-differential", "face", r.hash(), pr.k}, q));
  r.field_plot("u.svg", s.u, "u");
  r.field_plot("q_abs.svg", q.cwiseAbs(), "|q|");
}

int cmd_mesh_gen(Run& r) {
  const auto& m = r.mesh();
  const auto rep = geometry::validate_mesh(m, !m.generated);
  r.emit("mesh.json", io::mesh_to_json(m));
  r.results() = {{"vertices", m.n_vertices},
                 {"faces", m.n_faces()},
                 {"edges", m.n_edges()},
                 {"euler", rep.euler},
                 {"worst_angle_defect", rep.worst_angle_defect},
                 {"area_mismatch", rep.area_mismatch},
                 {"valid", rep.passed()}};
  r.out() << "mesh: V=" << m.n_vertices << " F=" << m.n_faces() << " E=" << m.n_edges() << " chi=" << rep.euler
          << (rep.passed() ? " valid" : " INVALID") << "\n";
  return rep.passed() ? kOk : kCertificationFailure;
}

int cmd_basis(Run& r) {
  const auto& b = r.basis();
  for (int i = 0; i < b.dimension; ++i)
    r.emit("basis_" + std::to_string(i) + ".json",
           io::field_to_json({"k-differential", "face", r.hash(), r.cfg().k}, b.elements[i]));
  r.results() = {{"k", b.k},
                 {"dimension", b.dimension},
                 {"method", b.method},
                 {"gap_ratio", b.gap_ratio},
                 {"singular_values", b.singular_values}};
  r.out() << "basis: k=" << b.k << " dimension " << b.dimension << " gap " << b.gap_ratio << "\n";
  return kOk;
}

int cmd_solve(Run& r) {
  const auto& pr = r.problem();
  const auto beta = r.beta_field();
  solver::Solution s;
  int code = kOk;
  try {
    s = solver::solve(pr, beta, r.options());
  } catch (const solver::NonConvergence& e) {
    s = e.best;
    r.note(e.what());
    code = kNumericalFailure;
  }
  emit_solution(r, pr, s);
  r.results() = solution_summary(s);
  r.out() << "solve: D=" << io::format_real(s.D_value) << " residual_u=" << s.residual_u
          << " residual_eta=" << s.residual_eta << " iterations=" << s.iterations
          << (s.converged ? " converged" : " NOT converged") << "\n";
  return code;
}

int cmd_verify(Run& r) {
  if (r.cfg().solution_path.empty()) throw ConfigError("verify needs solution=<file>");
  std::string h;
  const auto s = io::solution_from_json(io::read_json(r.cfg().solution_path), &h);
  if (h != r.hash()) throw ConfigError("solution belongs to a different mesh");
  if (s.k != r.cfg().k) throw ConfigError("solution has k = " + std::to_string(s.k));
  const auto& pr = r.problem();
  if (s.u.size() != pr.n_vertices() || s.eta.size() != pr.n_vertices() || s.beta0.size() != pr.n_faces())
    throw StructuralError("solution arrays do not match the mesh");

  auto rep = analysis::certify_second_variation(pr, s, r.cfg().samples, r.cfg().seed);
  const double el = analysis::certify_el_equivalence(pr, s, 20, r.cfg().seed + 7);
  if (!(el <= 1e-8)) rep.failures.push_back("el_equivalence (" + io::format_real(el) + ")");
  json j = io::certification_to_json(rep);
  j["el_equivalence"] = el;
  if (r.cfg().bochner) {
    try {
      j["bochner"] = analysis::certify_bochner(r.mesh(), r.cfg().k);
    } catch (const CertificationError& e) {
      rep.failures.push_back(std::string("bochner: ") + e.what());
    }
  }
  j["passed"] = rep.passed();
  j["failures"] = rep.failures;
  r.emit("certification.json", j);
  r.results() = j;

  auto row = [&](const std::string& name, double v, bool ok) {
    r.out() << std::left << std::setw(26) << name << std::setw(14) << v << (ok ? "pass" : "FAIL") << "\n";
  };
  row("residual_u", rep.residual_u, rep.residual_u <= 1e-8);
  row("residual_eta", rep.residual_eta, rep.residual_eta <= 1e-8);
  row("sigma", rep.sigma, rep.sigma > 0.0 && rep.sigma_converged);
  row("decomposition_identity", rep.decomposition_error, rep.decomposition_error <= 1e-10);
  row("remainder_margin", rep.remainder_margin, rep.remainder_margin >= -analysis::kInequalitySlack);
  row("weighted_poincare_margin", rep.weighted_poincare_margin,
      rep.weighted_poincare_margin >= -analysis::kInequalitySlack);
  row("local_min_violations", rep.local_min_violations, rep.local_min_violations == 0);
  row("el_equivalence", el, el <= 1e-8);
  r.out() << "poincare worst ratio (reported): " << rep.poincare_worst_ratio << "\n";
  for (const auto& f : rep.failures) r.out() << "failed: " << f << "\n";
  return rep.passed() ? kOk : kCertificationFailure;
}

int cmd_sweep(Run& r) {
  const auto& pr = r.problem();
  const auto grid = parse_grid(r.cfg().t_grid);
  const auto beta = r.beta_field();
  const auto pts = solver::sweep_ray(pr, beta, grid, r.options());
  r.emit("sweep.csv", io::sweep_csv(pts));
  std::vector<double> t, D, su;
  bool all = true;
  for (const auto& p : pts) {
    all = all && p.converged;
    if (!p.error.empty()) r.note("t=" + io::format_real(p.t) + ": " + p.error);
    if (!p.converged) continue;
    t.push_back(p.t);
    D.push_back(p.D);
    su.push_back(p.sup_u);
  }
  r.emit("sweep_D.svg", plot::line_svg(t, D, "Donaldson functional along the ray", "t", "D"));
  r.emit("sweep_sup_u.svg", plot::line_svg(t, su, "sup u along the ray", "t", "sup u"));
  r.results() = {{"points", pts.size()}, {"all_converged", all}};
  r.out() << "sweep: " << pts.size() << " points" << (all ? "" : ", some NOT converged") << "\n";
  return all ? kOk : kNumericalFailure;
}

int cmd_cmc(Run& r) {
  if (r.cfg().k != 2) throw ConfigError("cmc needs k = 2");
  const auto& pr = r.problem();
  const auto res = applications::cmc_solve(pr, r.beta_field(), r.cfg().c, r.options());
  emit_solution(r, pr, res.solution);
  r.emit("immersion.csv", io::immersion_csv(res.data));
  r.field_plot("cmc_u.svg", res.data.u, "u of the induced metric");
  json j = solution_summary(res.solution);
  j["c"] = res.data.c;
  j["gauss_residual"] = res.data.gauss_residual;
  j["curvature_mismatch"] = res.data.curvature_mismatch;
  r.results() = j;
  r.out() << "cmc: c=" << res.data.c << " gauss residual " << res.data.gauss_residual << " curvature mismatch "
          << res.data.curvature_mismatch << "\n";
  if (!res.solution.converged) return kNumericalFailure;
  return res.data.gauss_residual <= 1e-7 ? kOk : kCertificationFailure;
}

int cmd_fixedq(Run& r) {
  const auto& pr = r.problem();
  const Eigen::VectorXcd q = r.beta_field(true);
  const auto res = applications::fixed_q_solve(pr, q, parse_grid(r.cfg().t_grid));
  r.emit("fixedq.csv", io::fixedq_csv(res));
  std::vector<double> t, ev;
  for (size_t i = 0; i < res.t_grid.size(); ++i)
    if (res.status[i] == "ok") {
      t.push_back(res.t_grid[i]);
      ev.push_back(res.min_eigenvalue[i]);
    }
  r.emit("fixedq_min_eig.svg", plot::line_svg(t, ev, "smallest Jacobian eigenvalue", "t", "lambda_min"));
  json j;
  j["fold_t"] = res.fold_t ? json(*res.fold_t) : json(nullptr);
  if (!r.cfg().crosscheck_t.empty()) {
    std::ostringstream csv;
    csv << "t,distance,u_distance,q_distance\n";
    for (double tc : parse_grid(r.cfg().crosscheck_t)) {
      const auto c = applications::crosscheck_formulations(pr, q, tc, r.options());
      csv << io::format_real(tc) << ',' << io::format_real(c.distance) << ',' << io::format_real(c.u_distance)
          << ',' << io::format_real(c.q_distance) << '\n';
    }
    r.emit("crosscheck.csv", csv.str());
  }
  r.results() = j;
  r.out() << "fixedq: fold "
          << (res.fold_t ? "at t=" + io::format_real(*res.fold_t) : std::string("not reached")) << "\n";
  return kOk;
}

int cmd_report(Run& r) {
  if (r.cfg().input_dir.empty()) throw ConfigError("report needs dir=<run directory>");
  const fs::path dir(r.cfg().input_dir);
  const json m = io::read_json((dir / "manifest.json").string());
  std::ostringstream md;
  md << "# Run report\n\ncommand: `" << m.value("command", "") << "`\n\n";
  if (m.contains("mesh_hash")) md << "mesh hash: `" << m["mesh_hash"].get<std::string>() << "`\n\n";
  md << "## Results\n\n| key | value |\n|---|---|\n";
  for (const auto& [k, v] : m["results"].items()) md << "| " << k << " | " << v.dump() << " |\n";
  md << "\n## Outputs\n\n| file | sha256 | check |\n|---|---|---|\n";
  int bad = 0;
  for (const auto& o : m["outputs"]) {
    const std::string f = o["file"];
    const std::string want = o["sha256"];
    std::string got;
    try {
      got = io::sha256_file((dir / f).string());
    } catch (const ResourceError&) {
      got = "missing";
    }
    const bool ok = got == want;
    bad += !ok;
    md << "| " << f << " | `" << want.substr(0, 16) << "` | " << (ok ? "ok" : "MISMATCH") << " |\n";
  }
  if (m.contains("notes")) {
    md << "\n## Notes\n\n";
    for (const auto& n : m["notes"]) md << "- " << n.get<std::string>() << "\n";
  }
  md << "\n## Configuration\n\n```\n" << m.value("config", "") << "```\n";
  r.emit("report.md", md.str());
  r.results() = {{"source", dir.string()}, {"outputs_checked", m["outputs"].size()}, {"mismatches", bad}};
  r.out() << "report: " << m["outputs"].size() << " outputs checked, " << bad << " mismatch(es)\n";
  return bad == 0 ? kOk : kCertificationFailure;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> g;
  try {
    if (spec.find(':') != std::string::npos) {
      std::vector<std::string> parts;
      std::stringstream ss(spec);
      std::string p;
      while (std::getline(ss, p, ':')) parts.push_back(p);
      if (parts.size() != 3) throw ConfigError("grid 'start:stop:n' needs three fields");
      const double a = std::stod(parts[0]), b = std::stod(parts[1]);
      const int n = std::stoi(parts[2]);
      if (n < 1) throw ConfigError("grid needs n >= 1");
      for (int i = 0; i < n; ++i) g.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    } else {
      std::stringstream ss(spec);
      std::string p;
      while (std::getline(ss, p, ',')) g.push_back(std::stod(p));
    }
  } catch (const std::invalid_argument&) {
    throw ConfigError("bad grid '" + spec + "'");
  } catch (const std::out_of_range&) {
    throw ConfigError("bad grid '" + spec + "'");
  }
  if (g.empty()) throw ConfigError("empty grid");
  for (size_t i = 1; i < g.size(); ++i)
    if (!(g[i] > g[i - 1])) throw ConfigError("grid must be increasing");
  return g;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Donaldson functional solver on discretized genus-2 hyperbolic surfaces", "hyperdon"};
  app.set_config("--config", "", "key=value configuration file; command-line flags override it");
  app.add_option("command", cfg.command, "mesh-gen | basis | solve | verify | sweep | cmc | fixedq | report")
      ->check(CLI::IsMember({"mesh-gen", "basis", "solve", "verify", "sweep", "cmc", "fixedq", "report"}));
  app.add_option("--mesh", cfg.mesh_path, "mesh JSON file (default: generated genus-2 mesh)");
  app.add_option("--level", cfg.level, "generator level");
  app.add_option("--k", cfg.k, "power of the canonical bundle");
  app.add_option("--beta", cfg.beta, "class: zero | basis:i | basis:i,t | field file (fixedq: the differential)");
  app.add_option("--c", cfg.c, "mean curvature for cmc");
  app.add_option("--t-grid", cfg.t_grid, "a,b,c or start:stop:n");
  app.add_option("--crosscheck-t", cfg.crosscheck_t, "t values for the fixedq crosscheck");
  app.add_option("--solution", cfg.solution_path, "solution file for verify");
  app.add_option("--out", cfg.output_dir, "output directory");
  app.add_option("--dir", cfg.input_dir, "run directory for report");
  app.add_option("--samples", cfg.samples, "random samples for verify");
  app.add_flag("--bochner", cfg.bochner, "also run the Bochner gate in verify");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--deterministic", cfg.deterministic, "deterministic mode");
  app.add_option("--grad-tol", cfg.grad_tol, "solver residual tolerance");
  app.add_option("--max-outer", cfg.max_outer, "solver iteration cap");
  app.add_option("--eta-solver", cfg.eta_solver, "direct | cg");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  }
  if (cfg.command.empty()) {
    err << "configuration error: no command given\n";
    return kConfigError;
  }
  if (const char* th = std::getenv("HYPERDON_THREADS")) Eigen::setNbThreads(std::max(1, std::atoi(th)));

  const auto t0 = std::chrono::steady_clock::now();
  try {
    Run r(cfg, out);
    int code = kOk;
    try {
      if (cfg.command == "mesh-gen") code = cmd_mesh_gen(r);
      else if (cfg.command == "basis") code = cmd_basis(r);
      else if (cfg.command == "solve") code = cmd_solve(r);
      else if (cfg.command == "verify") code = cmd_verify(r);
      else if (cfg.command == "sweep") code = cmd_sweep(r);
      else if (cfg.command == "cmc") code = cmd_cmc(r);
      else if (cfg.command == "fixedq") code = cmd_fixedq(r);
      else code = cmd_report(r);
    } catch (...) {
      r.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      throw;
    }
    r.emit("config.ini", echo(cfg));
    r.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    if (code == kCertificationFailure) err << "certification failed\n";
    if (code == kNumericalFailure) err << "numerical failure\n";
    return code;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const StructuralError& e) {
    err << "input error: " << e.what() << "\n";
    return kConfigError;
  } catch (const CertificationError& e) {
    err << "certification failed: " << e.what() << "\n";
    return kCertificationFailure;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const fs::filesystem_error& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace hyperdon::cli
