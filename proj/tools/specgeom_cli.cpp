#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "sg/conformal.hpp"
#include "sg/eigensolver.hpp"
#include "sg/errors.hpp"
#include "sg/mesh.hpp"
#include "sg/operators.hpp"
#include "sg/surface.hpp"
#include "sg/verify.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
  std::string command;
  std::string surface = "clifford";
  std::string op = "jacobi";
  std::vector<int> res{128};
  int k = 6;
  double tol = 1e-9;
  double r = 0.6, t = 0.48, h = 0.64;
  int sphere_dim = 3;
  std::vector<double> y;
  std::string weights = "constant";
  std::string theorem;
  int samples = 1000;
  std::string out;
  std::string format = "json";
  std::string export_mesh;
  std::uint64_t seed = sg::kDefaultSeed;
  bool no_timestamp = false;
};

std::string join_invocation(int argc, char** argv) {
  std::ostringstream s;
  for (int i = 0; i < argc; ++i) s << (i ? " " : "") << argv[i];
  return s.str();
}

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void check_finite(const nlohmann::json& j) {
  if (j.is_number_float()) {
    if (!std::isfinite(j.get<double>()))
      throw std::runtime_error("non-finite number in output document");
  } else if (j.is_array() || j.is_object()) {
    for (const auto& item : j) check_finite(item);
  }
}

void emit_error(const std::string& kind, const std::string& detail) {
  nlohmann::json err;
  err["error"] = kind;
  err["detail"] = detail;
  std::cerr << err.dump() << "\n";
}

std::array<int, 2> resolve_res(const std::vector<int>& res) {
  if (res.empty() || res.size() > 2)
    throw std::invalid_argument("--res takes one or two integers");
  std::array<int, 2> out{res[0], res.size() == 2 ? res[1] : res[0]};
  for (int v : out)
    if (v < 8 || v > 1024)
      throw std::invalid_argument("--res must lie in [8, 1024] per axis");
  return out;
}

sg::SurfacePtr build_surface(const Options& opt) {
  return sg::make_surface(opt.surface, {{"r", opt.r},
                                        {"t", opt.t},
                                        {"h", opt.h},
                                        {"n", static_cast<double>(opt.sphere_dim)}});
}

sg::OperatorKind resolve_operator(const Options& opt, const sg::Surface& surf) {
  if (opt.op == "laplace") return sg::OperatorKind::Laplace;
  if (opt.op == "jacobi")
    return surf.ambient_kind() == sg::AmbientKind::ProductS1xS2
               ? sg::OperatorKind::JacobiProduct
               : sg::OperatorKind::JacobiSphere;
  if (opt.op == "jacobi_sphere") return sg::OperatorKind::JacobiSphere;
  if (opt.op == "jacobi_product") return sg::OperatorKind::JacobiProduct;
  throw std::invalid_argument("unknown operator '" + opt.op + "'");
}

std::string operator_name(sg::OperatorKind kind) {
  switch (kind) {
    case sg::OperatorKind::Laplace: return "laplace";
    case sg::OperatorKind::JacobiSphere: return "jacobi_sphere";
    case sg::OperatorKind::JacobiProduct: return "jacobi_product";
  }
  return "?";
}

sg::Vec resolve_y(const Options& opt, int ambient_dim) {
  if (opt.y.empty()) return sg::Vec::Zero(ambient_dim);
  if (static_cast<int>(opt.y.size()) != ambient_dim)
    throw std::invalid_argument("--y needs exactly one component per ambient coordinate");
  sg::Vec y(ambient_dim);
  for (int i = 0; i < ambient_dim; ++i) y[i] = opt.y[i];
  return y;
}

sg::Vec resolve_weights(const Options& opt, const sg::PeriodicMesh& mesh) {
  const int nv = mesh.num_vertices();
  sg::Vec w = sg::Vec::Ones(nv);
  if (opt.weights == "constant") return w;
  if (opt.weights == "cosu") {
    for (int i = 0; i < nv; ++i) w[i] = 1.0 + 0.5 * std::cos(mesh.vertex_params[i][0]);
    return w;
  }
  throw std::invalid_argument("unknown weights '" + opt.weights + "' (constant|cosu)");
}

nlohmann::json surface_params(const Options& opt) {
  nlohmann::json p = nlohmann::json::object();
  if (opt.surface == "section5") {
    p["r"] = opt.r;
    p["t"] = opt.t;
    p["h"] = opt.h;
  } else if (opt.surface == "sphere") {
    p["n"] = opt.sphere_dim;
  }
  return p;
}

int write_output(const Options& opt, nlohmann::json& doc, const std::string& csv,
                 bool pass) {
  check_finite(doc);
  std::string text;
  if (opt.format == "csv") {
    if (csv.empty())
      throw std::invalid_argument("--format csv is only available for eigenvalue tables");
    text = csv;
  } else {
    text = doc.dump(2) + "\n";
  }
  if (opt.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(opt.out);
    if (!f) throw std::runtime_error("cannot open output file '" + opt.out + "'");
    f << text;
  }
  return pass ? 0 : 1;
}

int run(const Options& opt, const std::string& invocation) {
  nlohmann::json doc;
  doc["invocation"] = invocation;
  doc["seed"] = opt.seed;
  doc["version"] = kVersion;
  if (!opt.no_timestamp) doc["timestamp"] = iso_timestamp();
  const std::array<int, 2> res = resolve_res(opt.res);
  doc["resolution"] = res;

  if (opt.format != "json" && opt.format != "csv")
    throw std::invalid_argument("--format must be json or csv");

  if (opt.command == "verify") {
    sg::TheoremReport rep;
    if (opt.theorem == "theorem1") {
      rep = sg::verify_theorem1(build_surface(opt), res, opt.tol, opt.seed);
    } else if (opt.theorem == "theorem2") {
      rep = sg::verify_theorem2(opt.r, opt.t, opt.h, res, opt.tol, opt.seed);
    } else if (opt.theorem == "section5") {
      rep = sg::verify_section5(opt.r, opt.t, opt.h, res, opt.tol, opt.seed);
    } else if (opt.theorem == "prop22") {
      rep = sg::prop22_scan(opt.r, opt.samples, opt.seed);
    } else {
      throw std::invalid_argument(
          "--theorem must be one of theorem1|theorem2|section5|prop22");
    }
    doc["surface"] = rep.surface;
    doc["params"] = rep.params;
    doc["results"] = rep.to_json();
    doc["verdict"] = rep.verdict;
    return write_output(opt, doc, "", rep.verdict == "pass");
  }

  sg::SurfacePtr surf = build_surface(opt);
  doc["surface"] = surf->name();
  doc["params"] = surface_params(opt);

  if (opt.command == "spectrum") {
    const sg::OperatorKind kind = resolve_operator(opt, *surf);
    const sg::Frame frame = kind == sg::OperatorKind::JacobiProduct ? sg::Frame::ProductM
                                                                    : sg::Frame::AmbientSphere;
    sg::PeriodicMesh mesh = sg::triangulate(surf, res, frame);
    if (!opt.export_mesh.empty()) sg::export_off(mesh, opt.export_mesh);
    sg::DiscreteOperator op = sg::assemble_operator(mesh, kind);
    sg::EigenResult eig = sg::smallest_eigenpairs(op.matrix(), op.mass, opt.k, opt.tol, opt.seed);

    nlohmann::json results;
    results["operator"] = operator_name(kind);
    results["eigenvalues"] = std::vector<double>(
        eig.eigenvalues.data(), eig.eigenvalues.data() + eig.eigenvalues.size());
    results["residuals"] =
        std::vector<double>(eig.residuals.data(), eig.residuals.data() + eig.residuals.size());
    results["iterations"] = eig.iterations;
    doc["results"] = results;

    std::ostringstream csv;
    csv << "index,eigenvalue,residual\n";
    csv.precision(17);
    for (int i = 0; i < eig.eigenvalues.size(); ++i)
      csv << i << "," << eig.eigenvalues[i] << "," << eig.residuals[i] << "\n";
    return write_output(opt, doc, csv.str(), true);
  }

  if (opt.command == "willmore") {
    sg::PeriodicMesh mesh = sg::triangulate(surf, res, sg::Frame::AmbientSphere);
    if (!opt.export_mesh.empty()) sg::export_off(mesh, opt.export_mesh);
    nlohmann::json results;
    results["area"] = sg::assemble_mass(mesh).sum();
    results["willmore"] = sg::willmore_energy(mesh);
    results["gauss_bonnet_chi"] = sg::gauss_bonnet_chi(mesh);
    doc["results"] = results;
    return write_output(opt, doc, "", true);
  }

  if (opt.command == "conformal-area") {
    sg::PeriodicMesh mesh = sg::triangulate(surf, res, sg::Frame::AmbientSphere);
    if (!opt.export_mesh.empty()) sg::export_off(mesh, opt.export_mesh);
    const sg::Vec y = resolve_y(opt, surf->ambient_dim());
    doc["params"]["y"] = std::vector<double>(y.data(), y.data() + y.size());
    const sg::EqualityResidual diag = sg::equality_diagnostic_both(mesh, y);
    nlohmann::json results;
    results["area"] = sg::assemble_mass(mesh).sum();
    results["conformal_area"] = sg::conformal_area(mesh, y);
    results["willmore"] = sg::willmore_energy(mesh);
    results["equality_residual_z"] = diag.z_form;
    results["equality_residual_y"] = diag.y_form;
    doc["results"] = results;
    return write_output(opt, doc, "", true);
  }

  if (opt.command == "balance") {
    sg::PeriodicMesh mesh = sg::triangulate(surf, res, sg::Frame::AmbientSphere);
    if (!opt.export_mesh.empty()) sg::export_off(mesh, opt.export_mesh);
    const sg::Vec w = resolve_weights(opt, mesh);
    const sg::BalanceResult bal = sg::balance(mesh, w);
    nlohmann::json results;
    results["y"] = std::vector<double>(bal.y.data(), bal.y.data() + bal.y.size());
    results["residual"] = bal.residual;
    results["iterations"] = bal.iterations;
    results["weights"] = opt.weights;
    doc["results"] = results;
    return write_output(opt, doc, "", true);
  }

  throw std::invalid_argument("unknown command '" + opt.command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Numerical laboratory for stability operators of immersed surfaces"};
  app.require_subcommand(1);
  app.fallthrough();
  // Keep -h free for the section5 height parameter.
  app.set_help_flag("--help", "print usage");

  app.add_option("--surface", opt.surface,
                 "clifford|equilateral|section5|sphere|lawson31|bipolar-lawson31");
  app.add_option("--operator", opt.op, "laplace|jacobi|jacobi_sphere|jacobi_product");
  app.add_option("--res", opt.res, "grid resolution (one or two integers in [8,1024])")
      ->expected(1, 2);
  app.add_option("--k", opt.k, "number of eigenpairs");
  app.add_option("--tol", opt.tol, "eigensolver residual tolerance");
  app.add_option("--r", opt.r, "S^1 radius (section5/prop22)");
  app.add_option("--t", opt.t, "first S^2 chart radius (section5)");
  app.add_option("--h", opt.h, "height coordinate (section5)");
  app.add_option("--n", opt.sphere_dim, "ambient sphere dimension for --surface sphere");
  app.add_option("--y", opt.y, "conformal parameter point (comma separated)")->delimiter(',');
  app.add_option("--weights", opt.weights, "balance weights: constant|cosu");
  app.add_option("--theorem", opt.theorem, "verify target: theorem1|theorem2|section5|prop22");
  app.add_option("--samples", opt.samples, "sample count for prop22");
  app.add_option("--out", opt.out, "output path (default stdout)");
  app.add_option("--format", opt.format, "json|csv");
  app.add_option("--seed", opt.seed, "PRNG seed recorded in outputs");
  app.add_flag("--no-timestamp", opt.no_timestamp, "omit the timestamp field");
  app.add_option("--export-mesh", opt.export_mesh, "write the mesh as OFF to this path");

  for (const char* name : {"spectrum", "willmore", "conformal-area", "balance", "verify"})
    app.add_subcommand(name)->callback([&opt, name]() { opt.command = name; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("usage", e.what());
    return 2;
  }

  try {
    return run(opt, join_invocation(argc, argv));
  } catch (const sg::NonConvergenceError& e) {
    emit_error("non-convergence", e.what());
    return 3;
  } catch (const sg::MeshQualityError& e) {
    emit_error("verification", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    emit_error("usage", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    emit_error("usage", e.what());
    return 2;
  } catch (const std::out_of_range& e) {
    emit_error("usage", e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("error", e.what());
    return 1;
  }
}
