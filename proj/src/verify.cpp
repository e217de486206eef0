#include "sg/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "sg/conformal.hpp"
#include "sg/errors.hpp"
#include "sg/operators.hpp"
#include "sg/product.hpp"

namespace sg {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

std::array<int, 2> half_res(std::array<int, 2> res) {
  return {std::max(8, res[0] / 2), std::max(8, res[1] / 2)};
}

EigenResult low_spectrum(const PeriodicMesh& mesh, OperatorKind kind, int k, double tol,
                         std::uint64_t seed) {
  DiscreteOperator op = assemble_operator(mesh, kind);
  return smallest_eigenpairs(op.matrix(), op.mass, k, tol, seed);
}

void fill_verdict(TheoremReport& rep) {
  rep.margin = rep.rhs + rep.error_estimate - rep.lhs;
  rep.verdict = (rep.lhs <= rep.rhs + rep.error_estimate) ? "pass" : "fail";
}

}  // namespace

std::vector<double> Section5Oracle::smallest_laplace(int k) const {
  std::vector<double> vals;
  const int range = 8;
  for (int m = -range; m <= range; ++m)
    for (int n = -range; n <= range; ++n) vals.push_back(laplace_eigenvalue(m, n));
  std::sort(vals.begin(), vals.end());
  vals.resize(k);
  return vals;
}

Section5Oracle section5_oracle(double r, double t, double h) {
  if (!(r > 0.0) || !(t > 0.0))
    throw std::invalid_argument("section5_oracle: r and t must be positive");
  if (std::abs(r * r + t * t + h * h - 1.0) > 1e-12)
    throw std::invalid_argument("section5_oracle: r^2 + t^2 + h^2 = 1 required");
  Section5Oracle o;
  o.r = r;
  o.t = t;
  o.h = h;
  o.s = std::sqrt(t * t + h * h);
  return o;
}

double section5_lambda2(double r, double t, double h) {
  return section5_oracle(r, t, h).lambda2_jacobi();
}

nlohmann::json TheoremReport::to_json() const {
  nlohmann::json j;
  j["surface"] = surface;
  j["params"] = params;
  j["resolution"] = resolution;
  j["operator"] = op;
  j["lambda"] = lambda;
  j["lhs"] = lhs;
  j["rhs"] = rhs;
  j["margin"] = margin;
  j["error_estimate"] = error_estimate;
  j["verdict"] = verdict;
  j["seed"] = seed;
  if (!notes.empty()) j["notes"] = notes;
  return j;
}

int gauss_bonnet_chi(const PeriodicMesh& mesh) {
  const Vec mass = assemble_mass(mesh);
  double total = 0.0;
  for (int i = 0; i < mesh.num_vertices(); ++i)
    total += mesh.vertex_geometry[i].gauss_curv * mass[i];
  const double chi = total / kTwoPi;
  const double rounded = std::round(chi);
  if (std::abs(chi - rounded) > 0.1) {
    std::ostringstream msg;
    msg << "gauss_bonnet_chi: curvature integral / 2pi = " << chi
        << " is not near an integer (mesh too coarse?)";
    throw MeshQualityError(msg.str());
  }
  return static_cast<int>(rounded);
}

TheoremReport verify_section5(double r, double t, double h, std::array<int, 2> res, double tol,
                              std::uint64_t seed) {
  Section5Oracle oracle = section5_oracle(r, t, h);
  SurfacePtr surf = section5_torus(r, t, h);
  PeriodicMesh mesh = triangulate(surf, res, Frame::ProductM);

  const int k = 6;
  EigenResult lap = low_spectrum(mesh, OperatorKind::Laplace, k, tol, seed);
  EigenResult jac = low_spectrum(mesh, OperatorKind::JacobiProduct, k, tol, seed);

  const std::vector<double> lap_oracle = oracle.smallest_laplace(k);
  double lap_mismatch = 0.0;
  for (int i = 0; i < k; ++i) {
    const double scale = std::max(1.0, std::abs(lap_oracle[i]));
    lap_mismatch = std::max(lap_mismatch, std::abs(lap.eigenvalues[i] - lap_oracle[i]) / scale);
  }
  const double l2_oracle = oracle.lambda2_jacobi();
  const double l2_scale = std::max(1.0, std::abs(l2_oracle));
  const double l2_mismatch = std::abs(jac.eigenvalues[1] - l2_oracle) / l2_scale;

  TheoremReport rep;
  rep.surface = surf->name();
  rep.params = {{"r", r}, {"t", t}, {"h", h}};
  rep.resolution = res;
  rep.op = "jacobi_product";
  rep.lambda.assign(jac.eigenvalues.data(), jac.eigenvalues.data() + k);
  rep.seed = seed;
  rep.lhs = std::max(lap_mismatch, l2_mismatch);  // worst relative deviation
  rep.rhs = 0.0;
  rep.error_estimate = 1e-2;
  {
    std::ostringstream note;
    note << "closed-form lambda_2 = " << l2_oracle << ", numerical = " << jac.eigenvalues[1];
    rep.notes.push_back(note.str());
    std::ostringstream note2;
    note2 << "max relative Laplace eigenvalue deviation = " << lap_mismatch;
    rep.notes.push_back(note2.str());
  }
  fill_verdict(rep);
  return rep;
}

TheoremReport verify_theorem1(SurfacePtr surface, std::array<int, 2> res, double tol,
                              std::uint64_t seed) {
  if (!surface) throw std::invalid_argument("verify_theorem1: null surface");
  if (surface->is_sphere_chart())
    throw std::invalid_argument("verify_theorem1: requires a torus (chi <= 0)");

  auto ingredients = [&](std::array<int, 2> r) {
    PeriodicMesh mesh = triangulate(surface, r, Frame::AmbientSphere);
    EigenResult eig = low_spectrum(mesh, OperatorKind::JacobiSphere, 6, tol, seed);
    const double area = assemble_mass(mesh).sum();
    const double willmore = willmore_energy(mesh);
    const int chi = gauss_bonnet_chi(mesh);
    return std::tuple<EigenResult, double, double, int>(eig, area, willmore, chi);
  };

  auto [eig, area, willmore, chi] = ingredients(res);
  auto [eig_h, area_h, willmore_h, chi_h] = ingredients(half_res(res));

  TheoremReport rep;
  rep.surface = surface->name();
  rep.resolution = res;
  rep.op = "jacobi_sphere";
  rep.lambda.assign(eig.eigenvalues.data(), eig.eigenvalues.data() + eig.eigenvalues.size());
  rep.seed = seed;
  rep.lhs = eig.eigenvalues[1] * area;
  rep.rhs = -2.0 * willmore + 2.0 * kTwoPi * chi;
  const double lhs_h = eig_h.eigenvalues[1] * area_h;
  const double rhs_h = -2.0 * willmore_h + 2.0 * kTwoPi * chi_h;
  // Richardson-style estimate from the refinement pair (second-order scheme).
  rep.error_estimate =
      (std::abs(rep.lhs - lhs_h) + std::abs(rep.rhs - rhs_h)) / 3.0 + 1e-8;
  fill_verdict(rep);

  {
    std::ostringstream note;
    note << "area = " << area << ", willmore = " << willmore << ", chi = " << chi;
    rep.notes.push_back(note.str());
  }
  if (surface->name() == "clifford" || surface->name() == "equilateral") {
    const double dev = std::abs(eig.eigenvalues[1] + 2.0);
    std::ostringstream note;
    note << "equality case: |lambda_2 + 2| = " << dev;
    rep.notes.push_back(note.str());
    if (dev > 0.05) rep.verdict = "fail";
  }
  if (surface->name().rfind("bipolar-", 0) == 0 || surface->name() == "lawson31") {
    rep.notes.push_back(
        "parameter domain is a covering of the image surface; eigenvalues refer to the covering");
  }
  return rep;
}

TheoremReport verify_theorem2(double r, double t, double h, std::array<int, 2> res, double tol,
                              std::uint64_t seed) {
  Section5Oracle oracle = section5_oracle(r, t, h);
  SurfacePtr surf = section5_torus(r, t, h);

  auto lambda2_at = [&](std::array<int, 2> rr) {
    PeriodicMesh mesh = triangulate(surf, rr, Frame::ProductM);
    return low_spectrum(mesh, OperatorKind::JacobiProduct, 6, tol, seed);
  };
  EigenResult eig = lambda2_at(res);
  EigenResult eig_h = lambda2_at(half_res(res));

  TheoremReport rep;
  rep.surface = surf->name();
  rep.params = {{"r", r}, {"t", t}, {"h", h}};
  rep.resolution = res;
  rep.op = "jacobi_product";
  rep.lambda.assign(eig.eigenvalues.data(), eig.eigenvalues.data() + eig.eigenvalues.size());
  rep.seed = seed;
  rep.lhs = eig.eigenvalues[1];
  rep.rhs = 0.0;
  rep.error_estimate =
      std::abs(eig.eigenvalues[1] - eig_h.eigenvalues[1]) / 3.0 + std::max(10.0 * tol, 1e-8);
  fill_verdict(rep);

  if (oracle.r < oracle.s) {
    rep.notes.push_back("hypothesis r >= s not satisfied: report is a sharpness witness only");
    if (h != 0.0)
      rep.notes.push_back("lambda_2 = 0 without total geodesy (kappa_2 != 0)");
  } else if (std::abs(oracle.kappa2()) < 1e-12) {
    rep.notes.push_back("totally geodesic member: equality case lambda_2 = 0");
  }
  return rep;
}

TheoremReport prop22_scan(double r, int samples, std::uint64_t seed) {
  const double r_min = 1.0 / std::sqrt(2.0) - 1e-12;
  if (r < r_min || r >= 1.0)
    throw std::invalid_argument("prop22_scan: r must lie in [1/sqrt(2), 1)");
  if (samples < 1) throw std::invalid_argument("prop22_scan: need at least one sample");

  ProductGeometry geom(r);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);

  auto random_point = [&]() {
    const double phi = angle(rng);
    Eigen::Vector3d b;
    do {
      b << gauss(rng), gauss(rng), gauss(rng);
    } while (b.norm() < 1e-3);
    b *= geom.s / b.norm();
    Vec p(5);
    p << geom.r * std::cos(phi), geom.r * std::sin(phi), b[0], b[1], b[2];
    return p;
  };
  // Orthonormal basis {e1, w1, w2} of the tangent space of M at p.
  auto tangent_basis = [&](const Vec& p) {
    Vec e = geom.e1(p);
    Eigen::Vector3d b = p.tail<3>();
    Eigen::Vector3d any = std::abs(b[0]) < 0.9 * b.norm() ? Eigen::Vector3d::UnitX()
                                                          : Eigen::Vector3d::UnitY();
    Eigen::Vector3d u1 = b.cross(any).normalized();
    Eigen::Vector3d u2 = b.cross(u1).normalized();
    Vec w1 = Vec::Zero(5), w2 = Vec::Zero(5);
    w1.tail<3>() = u1;
    w2.tail<3>() = u2;
    return std::array<Vec, 3>{e, w1, w2};
  };

  const double bound = 2.0 * r * r / (1.0 - r * r);
  double max_val = -1.0;

  // Canonical extremal planes: containing e1 and orthogonal to e1.
  {
    Vec p = random_point();
    auto basis = tangent_basis(p);
    max_val = std::max(max_val, rho_squared_sigma(geom, p, basis[0], basis[1]));
    max_val = std::max(max_val, rho_squared_sigma(geom, p, basis[1], basis[2]));
  }
  for (int i = 0; i < samples; ++i) {
    Vec p = random_point();
    auto basis = tangent_basis(p);
    Eigen::Matrix<double, 3, 2> coeff;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 2; ++b) coeff(a, b) = gauss(rng);
    Eigen::HouseholderQR<Eigen::Matrix<double, 3, 2>> qr(coeff);
    Eigen::Matrix<double, 3, 2> q =
        qr.householderQ() * Eigen::Matrix<double, 3, 2>::Identity();
    Vec x1 = q(0, 0) * basis[0] + q(1, 0) * basis[1] + q(2, 0) * basis[2];
    Vec x2 = q(0, 1) * basis[0] + q(1, 1) * basis[1] + q(2, 1) * basis[2];
    max_val = std::max(max_val, rho_squared_sigma(geom, p, x1, x2));
  }

  TheoremReport rep;
  rep.surface = "product-ambient tangent planes";
  rep.params = {{"r", r}, {"samples", static_cast<double>(samples)}};
  rep.op = "none";
  rep.seed = seed;
  rep.lhs = max_val;
  rep.rhs = bound;
  rep.error_estimate = 1e-12;
  fill_verdict(rep);
  if (max_val >= bound - 1e-9) rep.notes.push_back("bound attained within 1e-9");
  return rep;
}

}  // namespace sg
