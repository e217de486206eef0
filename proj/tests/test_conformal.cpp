#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "sg/conformal.hpp"
#include "sg/errors.hpp"
#include "sg/operators.hpp"
#include "sg/product.hpp"
#include "sg/surface.hpp"

using sg::Vec;

namespace {

Vec random_ball_point(std::mt19937_64& rng, int dim, double radius) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Vec y(dim);
  for (int i = 0; i < dim; ++i) y[i] = gauss(rng);
  y.normalize();
  y *= radius * std::pow(uni(rng), 1.0 / dim);
  return y;
}

}  // namespace

TEST_CASE("state identities") {
  std::mt19937_64 rng(5);
  for (int dim : {4, 5, 6}) {
    for (int trial = 0; trial < 30; ++trial) {
      Vec y = random_ball_point(rng, dim, 0.97);
      sg::ConformalState st(y);
      CHECK((st.z - 2.0 * y / (1.0 + y.squaredNorm())).norm() < 1e-14);
      Vec x = random_ball_point(rng, dim, 1.0).normalized();
      // (1 - |z|^2)/f^2 = rho^2 on the sphere.
      const double lhs = (1.0 - st.z.squaredNorm()) / std::pow(st.f(x), 2);
      CHECK(lhs == doctest::Approx(std::pow(st.rho(x), 2)).epsilon(1e-11));
      // F_y maps the sphere to the sphere.
      Vec fx = sg::conformal_map(st, x);
      CHECK(std::abs(fx.norm() - 1.0) < 1e-11);
    }
  }
  CHECK_THROWS_AS(sg::ConformalState(Vec::Ones(4)), std::invalid_argument);
}

TEST_CASE("y = 0 is the identity map") {
  sg::ConformalState st(Vec::Zero(4));
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    Vec x = random_ball_point(rng, 4, 1.0).normalized();
    CHECK((sg::conformal_map(st, x) - x).norm() < 1e-14);
  }
  auto mesh = sg::triangulate(sg::clifford_torus(), {24, 24});
  CHECK(sg::conformal_area(mesh, Vec::Zero(4)) ==
        doctest::Approx(mesh.total_area()).epsilon(1e-12));
}

TEST_CASE("willmore energy of the catalog") {
  // Minimal surfaces: W = area. Clifford at res 64 is within discretization error.
  auto mesh = sg::triangulate(sg::clifford_torus(), {64, 64});
  CHECK(sg::willmore_energy(mesh) == doctest::Approx(2 * M_PI * M_PI).epsilon(1e-6));
  auto sph = sg::triangulate(sg::great_sphere(3), {64, 32});
  CHECK(sg::willmore_energy(sph) == doctest::Approx(4 * M_PI).epsilon(1e-4));
  // Product-frame meshes have no round-sphere mean curvature data.
  auto pmesh = sg::triangulate(sg::section5_torus(0.6, 0.48, 0.64), {16, 16},
                               sg::Frame::ProductM);
  CHECK_THROWS_AS(sg::willmore_energy(pmesh), std::invalid_argument);
  CHECK_THROWS_AS(sg::equality_diagnostic(pmesh, Vec::Zero(5)), std::invalid_argument);
}

TEST_CASE("conformal images never exceed the willmore energy") {
  std::mt19937_64 rng(31);
  struct Entry {
    sg::SurfacePtr surf;
    std::array<int, 2> res;
  };
  const Entry entries[] = {
      {sg::clifford_torus(), {48, 48}},
      {sg::equilateral_torus(), {48, 48}},
      {sg::lawson_torus_31(), {48, 48}},
      {sg::great_sphere(3), {48, 24}},
  };
  for (const auto& e : entries) {
    CAPTURE(e.surf->name());
    auto mesh = sg::triangulate(e.surf, e.res);
    auto half = sg::triangulate(e.surf, {e.res[0] / 2, e.res[1] / 2});
    const double w = sg::willmore_energy(mesh);
    // Quadrature slack estimated from the refinement jump.
    const double slack =
        std::abs(w - sg::willmore_energy(half)) +
        std::abs(mesh.total_area() - half.total_area()) + 1e-9;
    for (int trial = 0; trial < 50; ++trial) {
      Vec y = random_ball_point(rng, e.surf->ambient_dim(), 0.9);
      CHECK(sg::conformal_area(mesh, y) <= w + slack);
    }
  }
}

TEST_CASE("dirichlet energy of a conformal image is twice its area") {
  auto mesh = sg::triangulate(sg::clifford_torus(), {64, 64});
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    Vec y = random_ball_point(rng, 4, 0.8);
    sg::ConformalState st(y);
    Eigen::MatrixXd img(mesh.num_vertices(), 4);
    for (int i = 0; i < mesh.num_vertices(); ++i)
      img.row(i) = sg::conformal_map(st, mesh.vertex_geometry[i].x);
    const double energy = sg::dirichlet_energy(mesh, img);
    const double area = sg::conformal_area(mesh, y);
    CHECK(energy == doctest::Approx(2 * area).epsilon(1e-2));
  }
}

TEST_CASE("great sphere: moebius images keep area 4pi, equality configuration") {
  auto mesh = sg::triangulate(sg::great_sphere(3), {64, 32});
  // In-span y: the image is again a great sphere, so the inequality is tight.
  Vec y = Vec::Zero(4);
  y[0] = 0.5;
  CHECK(sg::conformal_area(mesh, y) == doctest::Approx(4 * M_PI).epsilon(2e-3));
  // The quadrature error of the in-span image area contracts at second order.
  auto fine = sg::triangulate(sg::great_sphere(3), {128, 64});
  const double err_coarse = std::abs(sg::conformal_area(mesh, y) - 4 * M_PI);
  const double err_fine = std::abs(sg::conformal_area(fine, y) - 4 * M_PI);
  CHECK(err_fine < 0.4 * err_coarse);
  // Equality configuration: z and y both lie in the sphere's span, so both
  // residual forms vanish along with the mean curvature.
  auto eq = sg::equality_diagnostic_both(mesh, y);
  CHECK(eq.z_form < 1e-8);
  CHECK(eq.y_form < 1e-8);
  CHECK(sg::equality_diagnostic(mesh, y) == doctest::Approx(eq.z_form));
  // Orthogonal y scales rho uniformly (<x,y> = 0 on the whole sphere): the
  // image is a smaller round sphere and the discrete sum collapses exactly.
  Vec y2 = Vec::Zero(4);
  y2[3] = 0.4;
  const double rho = (1.0 - 0.16) / 1.16;
  CHECK(sg::conformal_area(mesh, y2) ==
        doctest::Approx(rho * rho * mesh.total_area()).epsilon(1e-12));
}

TEST_CASE("equality diagnostic is nonzero for the clifford torus") {
  auto mesh = sg::triangulate(sg::clifford_torus(), {32, 32});
  Vec y = Vec::Zero(4);
  y[1] = 0.3;
  auto eq = sg::equality_diagnostic_both(mesh, y);
  CHECK(eq.z_form > 0.1);
  // With vanishing mean curvature the two normalizations differ by the
  // constant factor relating z to y.
  CHECK(eq.z_form == doctest::Approx(eq.y_form * 2.0 / 1.09).epsilon(1e-12));
  // y = 0 is an exact equality configuration for any minimal surface.
  CHECK(sg::equality_diagnostic(mesh, Vec::Zero(4)) < 1e-10);
}

TEST_CASE("normal component projects out position and tangents") {
  auto mesh = sg::triangulate(sg::lawson_torus_31(), {16, 16});
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  for (int vertex : {0, 37, 101}) {
    Vec v(4);
    for (int i = 0; i < 4; ++i) v[i] = gauss(rng);
    Vec n = sg::normal_component(mesh, vertex, v);
    const auto& g = mesh.vertex_geometry[vertex];
    CHECK(std::abs(n.dot(g.x)) < 1e-10);
    CHECK(std::abs(n.dot(g.xu)) < 1e-10);
    CHECK(std::abs(n.dot(g.xv)) < 1e-10);
    CHECK((v - n).dot(n) == doctest::Approx(0.0).epsilon(1e-9));
  }
  // The product normal of M is already orthogonal to Sigma and to x, so the
  // projection leaves it untouched.
  auto s5 = sg::section5_torus(0.6, 0.48, 0.64);
  auto smesh = sg::triangulate(s5, {16, 16});
  sg::ProductGeometry pg = s5->product_geometry();
  Vec nu = pg.nu(smesh.vertex_geometry[21].x);
  CHECK((sg::normal_component(smesh, 21, nu) - nu).norm() < 1e-10);
}

TEST_CASE("balance: symmetric surfaces balance at the origin") {
  for (auto surf : {sg::clifford_torus(), sg::equilateral_torus()}) {
    CAPTURE(surf->name());
    auto mesh = sg::triangulate(surf, {32, 32});
    Vec w = Vec::Ones(mesh.num_vertices());
    auto res = sg::balance(mesh, w);
    CHECK(res.residual <= 1e-8);
    CHECK(res.y.norm() < 1e-7);
  }
}

TEST_CASE("balance: asymmetric weights move the balancing point off the origin") {
  auto mesh = sg::triangulate(sg::clifford_torus(), {32, 32});
  Vec w(mesh.num_vertices());
  for (int i = 0; i < mesh.num_vertices(); ++i)
    w[i] = 1.0 + 0.5 * std::cos(mesh.vertex_params[i][0]);
  auto res = sg::balance(mesh, w);
  CHECK(res.residual <= 1e-8);
  CHECK(res.y.norm() > 1e-4);
  CHECK(res.y.norm() < 1.0);

  // The returned point really zeroes the weighted center.
  sg::ConformalState st(res.y);
  Vec m = sg::assemble_mass(mesh);
  Vec center = Vec::Zero(4);
  double total = 0;
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    center += w[i] * m[i] * sg::conformal_map(st, mesh.vertex_geometry[i].x);
    total += w[i] * m[i];
  }
  CHECK(center.norm() / total <= 1e-8);
}

TEST_CASE("balance input validation") {
  auto mesh = sg::triangulate(sg::clifford_torus(), {16, 16});
  CHECK_THROWS_AS(sg::balance(mesh, Vec::Ones(3)), std::invalid_argument);
  Vec w = Vec::Ones(mesh.num_vertices());
  w[5] = -1.0;
  CHECK_THROWS_AS(sg::balance(mesh, w), std::invalid_argument);
}
