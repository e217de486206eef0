#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sg/errors.hpp"
#include "sg/mesh.hpp"
#include "sg/operators.hpp"

using sg::Vec;

namespace {

Eigen::MatrixXd position_matrix(const sg::PeriodicMesh& mesh) {
  const int n = mesh.num_vertices();
  Eigen::MatrixXd x(n, mesh.vertex_geometry[0].x.size());
  for (int i = 0; i < n; ++i) x.row(i) = mesh.vertex_geometry[i].x;
  return x;
}

// Relative strong-form residual of Delta x + 2x = 0 in the lumped metric.
double minimality_residual(const sg::PeriodicMesh& mesh) {
  Eigen::SparseMatrix<double> s = sg::assemble_stiffness(mesh);
  Vec m = sg::assemble_mass(mesh);
  Eigen::MatrixXd x = position_matrix(mesh);
  Eigen::MatrixXd r = s * x - 2.0 * m.asDiagonal() * x;
  double num = 0, den = 0;
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    num += r.row(i).squaredNorm() / m[i];
    den += m[i] * x.row(i).squaredNorm();
  }
  return std::sqrt(num) / (2.0 * std::sqrt(den));
}

}  // namespace

TEST_CASE("torus mesh combinatorics") {
  auto mesh = sg::triangulate(sg::clifford_torus(), {8, 8});
  CHECK(mesh.num_vertices() == 64);
  CHECK(mesh.num_triangles() == 128);
  CHECK(mesh.num_edges() == 192);
  CHECK(mesh.euler_characteristic() == 0);
  // Identification map wraps both directions.
  CHECK(mesh.grid_index(0, 0) == mesh.grid_index(8, 8));
  CHECK(mesh.grid_index(-1, 3) == mesh.grid_index(7, 3));
  // Every triangle references valid vertices and has positive area.
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int c : mesh.triangles[t]) {
      CHECK(c >= 0);
      CHECK(c < mesh.num_vertices());
    }
    CHECK(mesh.tri_area[t] > 0);
  }
}

TEST_CASE("sphere chart combinatorics") {
  auto mesh = sg::triangulate(sg::great_sphere(3), {16, 8});
  // 16*(8-1) ring vertices plus the two pole vertices.
  CHECK(mesh.num_vertices() == 16 * 7 + 2);
  CHECK(mesh.euler_characteristic() == 2);
  CHECK(mesh.grid_index(3, 0) == mesh.grid_index(9, 0));   // all collapse to the north vertex
  CHECK(mesh.grid_index(3, 8) == mesh.grid_index(12, 8));  // ... and the south vertex
  CHECK(mesh.grid_index(0, 2) == mesh.grid_index(16, 2));
}

TEST_CASE("mesh areas converge to the closed forms") {
  const double a_cliff = 2 * M_PI * M_PI;
  CHECK(sg::triangulate(sg::clifford_torus(), {64, 64}).total_area() ==
        doctest::Approx(a_cliff).epsilon(1e-6));
  // Flat metrics are integrated exactly up to roundoff.
  CHECK(sg::triangulate(sg::clifford_torus(), {8, 8}).total_area() ==
        doctest::Approx(a_cliff).epsilon(1e-12));
  CHECK(sg::triangulate(sg::equilateral_torus(), {64, 64}).total_area() ==
        doctest::Approx(4 * M_PI * M_PI / std::sqrt(3.0)).epsilon(1e-4));
  CHECK(sg::triangulate(sg::great_sphere(3), {64, 32}).total_area() ==
        doctest::Approx(4 * M_PI).epsilon(1e-3 / (4 * M_PI)));
  CHECK(sg::triangulate(sg::great_sphere(4), {64, 32}).total_area() ==
        doctest::Approx(4 * M_PI).epsilon(1e-3 / (4 * M_PI)));
  auto s5 = sg::section5_torus(0.6, 0.48, 0.64);
  CHECK(sg::triangulate(s5, {16, 16}, sg::Frame::ProductM).total_area() ==
        doctest::Approx(4 * M_PI * M_PI * 0.6 * 0.48).epsilon(1e-10));
}

TEST_CASE("area is frame independent") {
  auto s5 = sg::section5_torus(0.6, 0.48, 0.64);
  const double a = sg::triangulate(s5, {24, 24}, sg::Frame::ProductM).total_area();
  const double b = sg::triangulate(s5, {24, 24}, sg::Frame::AmbientSphere).total_area();
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("stiffness matrix: symmetric, constants in kernel, PSD samples") {
  for (auto mesh : {sg::triangulate(sg::clifford_torus(), {16, 16}),
                    sg::triangulate(sg::great_sphere(3), {24, 12})}) {
    Eigen::SparseMatrix<double> s = sg::assemble_stiffness(mesh);
    Eigen::SparseMatrix<double> diff = Eigen::SparseMatrix<double>(s.transpose()) - s;
    CHECK(diff.coeffs().cwiseAbs().maxCoeff() < 1e-12);
    Vec ones = Vec::Ones(mesh.num_vertices());
    CHECK((s * ones).cwiseAbs().maxCoeff() < 1e-10);
    std::srand(77);
    for (int trial = 0; trial < 20; ++trial) {
      Vec v = Vec::Random(mesh.num_vertices());
      CHECK(v.dot(s * v) >= -1e-10);
    }
  }
}

TEST_CASE("mass vector: positive, sums to area") {
  auto mesh = sg::triangulate(sg::equilateral_torus(), {20, 20});
  Vec m = sg::assemble_mass(mesh);
  CHECK(m.minCoeff() > 0);
  CHECK(m.sum() == doctest::Approx(mesh.total_area()).epsilon(1e-12));
}

TEST_CASE("dirichlet energy of a coordinate wave on the flat square torus") {
  // u(p) = cos(u-coordinate) on the Clifford torus: the energy is pi^2 * 2.
  auto mesh = sg::triangulate(sg::clifford_torus(), {128, 128});
  Eigen::MatrixXd vals(mesh.num_vertices(), 1);
  for (int i = 0; i < mesh.num_vertices(); ++i)
    vals(i, 0) = std::cos(mesh.vertex_params[i][0]);
  const double e = sg::dirichlet_energy(mesh, vals);
  CHECK(e == doctest::Approx(2 * M_PI * M_PI).epsilon(1e-2));
}

TEST_CASE("dirichlet energy of the position map is twice the area") {
  for (auto mesh : {sg::triangulate(sg::clifford_torus(), {32, 32}),
                    sg::triangulate(sg::lawson_torus_31(), {48, 48}),
                    sg::triangulate(sg::great_sphere(3), {48, 24})}) {
    const double e = sg::dirichlet_energy(mesh, position_matrix(mesh));
    CHECK(e == doctest::Approx(2 * mesh.total_area()).epsilon(1e-2));
  }
}

TEST_CASE("assembled operators carry the right potentials") {
  auto mesh = sg::triangulate(sg::clifford_torus(), {16, 16});
  auto lap = sg::assemble_operator(mesh, sg::OperatorKind::Laplace);
  CHECK(lap.potential.cwiseAbs().maxCoeff() == 0.0);
  auto jac = sg::assemble_operator(mesh, sg::OperatorKind::JacobiSphere);
  // |sigma|^2 + 2 = 4 on the Clifford torus, so Q = 4 M exactly.
  CHECK((jac.potential - 4.0 * jac.mass).cwiseAbs().maxCoeff() < 1e-12);
  // matrix() = S - Q.
  Eigen::SparseMatrix<double> a = jac.matrix();
  Eigen::SparseMatrix<double> expect = jac.stiffness;
  for (int i = 0; i < mesh.num_vertices(); ++i) expect.coeffRef(i, i) -= jac.potential[i];
  Eigen::SparseMatrix<double> diff = a - expect;
  CHECK(diff.coeffs().cwiseAbs().maxCoeff() < 1e-14);

  auto pmesh = sg::triangulate(sg::section5_torus(0.6, 0.48, 0.64), {16, 16},
                               sg::Frame::ProductM);
  auto pjac = sg::assemble_operator(pmesh, sg::OperatorKind::JacobiProduct);
  // |sigma|^2 + Ric(N,N) = 1/t^2 for every member of this family.
  CHECK((pjac.potential - (1.0 / 0.2304) * pjac.mass).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("operator kinds are tied to the mesh frame") {
  auto smesh = sg::triangulate(sg::clifford_torus(), {8, 8});
  CHECK_THROWS_AS(sg::assemble_operator(smesh, sg::OperatorKind::JacobiProduct),
                  std::invalid_argument);
  auto pmesh = sg::triangulate(sg::section5_torus(0.6, 0.48, 0.64), {8, 8},
                               sg::Frame::ProductM);
  CHECK_THROWS_AS(sg::assemble_operator(pmesh, sg::OperatorKind::JacobiSphere),
                  std::invalid_argument);
  CHECK_THROWS_AS(sg::triangulate(sg::clifford_torus(), {8, 8}, sg::Frame::ProductM),
                  std::invalid_argument);
}

TEST_CASE("strong-form minimality residual shrinks under refinement") {
  for (auto surf : {sg::clifford_torus(), sg::equilateral_torus(), sg::lawson_torus_31()}) {
    CAPTURE(surf->name());
    const double r16 = minimality_residual(sg::triangulate(surf, {16, 16}));
    const double r32 = minimality_residual(sg::triangulate(surf, {32, 32}));
    const double r64 = minimality_residual(sg::triangulate(surf, {64, 64}));
    CHECK(r32 < r16);
    CHECK(r64 < r32);
    CHECK(r64 < 0.02);
  }
}

TEST_CASE("OFF export writes a parseable file") {
  auto mesh = sg::triangulate(sg::clifford_torus(), {8, 8});
  const std::string path = "clifford_res8.off";
  sg::export_off(mesh, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "nOFF");
  int dim = 0, nv = 0, nf = 0, ne = 0;
  in >> dim >> nv >> nf >> ne;
  CHECK(dim == 4);
  CHECK(nv == mesh.num_vertices());
  CHECK(nf == mesh.num_triangles());
  // First vertex must reproduce the stored position.
  Eigen::Vector4d p;
  in >> p[0] >> p[1] >> p[2] >> p[3];
  CHECK((p - Eigen::Vector4d(mesh.vertex_geometry[0].x)).norm() < 1e-15);
  in.close();
  std::remove(path.c_str());
}

TEST_CASE("resolution validation") {
  CHECK_THROWS_AS(sg::triangulate(sg::clifford_torus(), {2, 16}), std::invalid_argument);
  CHECK_THROWS_AS(sg::triangulate(nullptr, {16, 16}), std::invalid_argument);
}
