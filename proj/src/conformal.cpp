#include "sg/conformal.hpp"

#include <cmath>
#include <stdexcept>

#include "sg/errors.hpp"
#include "sg/operators.hpp"

namespace sg {

ConformalState::ConformalState(const Vec& y_in) : y(y_in) {
  y_norm_sq = y.squaredNorm();
  if (!(y_norm_sq < 1.0))
    throw std::invalid_argument("ConformalState: y must lie in the open unit ball");
  z = 2.0 / (1.0 + y_norm_sq) * y;
}

Vec conformal_map(const ConformalState& state, const Vec& x) {
  return state.rho(x) * (x + state.y) + state.y;
}

double conformal_area(const PeriodicMesh& mesh, const Vec& y) {
  ConformalState state(y);
  const Vec mass = assemble_mass(mesh);
  double total = 0.0;
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    const double rho = state.rho(mesh.vertex_geometry[i].x);
    total += rho * rho * mass[i];
  }
  return total;
}

double willmore_energy(const PeriodicMesh& mesh) {
  if (mesh.frame != Frame::AmbientSphere)
    throw std::invalid_argument("willmore_energy: needs the ambient-sphere mean curvature");
  const Vec mass = assemble_mass(mesh);
  double total = 0.0;
  for (int i = 0; i < mesh.num_vertices(); ++i)
    total += (1.0 + mesh.vertex_geometry[i].mean_curv.squaredNorm()) * mass[i];
  return total;
}

namespace {

Vec clip_ball(const Vec& y, double radius, int& clip_count) {
  const double n = y.norm();
  if (n <= radius) return y;
  ++clip_count;
  return y * (radius / n);
}

}  // namespace

BalanceResult balance(const PeriodicMesh& mesh, const Vec& weights, double tol, int max_iter) {
  const int nv = mesh.num_vertices();
  if (weights.size() != nv) throw std::invalid_argument("balance: one weight per vertex");
  if (weights.minCoeff() <= 0.0)
    throw std::invalid_argument("balance: weights must be strictly positive");
  const int dim = mesh.surface->ambient_dim();

  const Vec wm = weights.cwiseProduct(assemble_mass(mesh));
  const double total = wm.sum();

  auto center = [&](const Vec& y) {
    ConformalState state(y);
    Vec g = Vec::Zero(dim);
    for (int i = 0; i < nv; ++i) g += wm[i] * conformal_map(state, mesh.vertex_geometry[i].x);
    return Vec(g / total);
  };

  int clip_count = 0;
  Vec y = -center(Vec::Zero(dim));
  if (y.norm() > 0.5) y *= 0.5 / y.norm();

  Vec g = center(y);
  double gn = g.norm();
  const double fd_step = 1e-6;
  int iter = 0;
  for (; iter < max_iter && gn > tol; ++iter) {
    Eigen::MatrixXd jac(dim, dim);
    for (int c = 0; c < dim; ++c) {
      Vec yp = y, ym = y;
      yp[c] += fd_step;
      ym[c] -= fd_step;
      jac.col(c) = (center(yp) - center(ym)) / (2.0 * fd_step);
    }
    Vec delta = jac.colPivHouseholderQr().solve(-g);

    double step = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 30; ++halving) {
      Vec y_try = clip_ball(y + step * delta, 0.999, clip_count);
      if (clip_count > 25)
        throw NonConvergenceError(
            "balance: iterates pinned to the ball boundary (measure concentration)", gn);
      Vec g_try = center(y_try);
      if (g_try.norm() < gn) {
        y = y_try;
        g = g_try;
        gn = g_try.norm();
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  if (gn > tol)
    throw NonConvergenceError("balance: Newton iteration failed to reach tolerance", gn);
  return BalanceResult{y, gn, iter};
}

Vec normal_component(const PeriodicMesh& mesh, int vertex, const Vec& v) {
  if (vertex < 0 || vertex >= mesh.num_vertices())
    throw std::out_of_range("normal_component: vertex index out of range");
  const PointGeometry& pg = mesh.vertex_geometry[vertex];
  Vec t1 = pg.xu.normalized();
  Vec t2 = pg.xv - t1.dot(pg.xv) * t1;
  t2 -= t1.dot(t2) * t1;
  t2.normalize();
  return project_out(v, {pg.x, t1, t2});
}

EqualityResidual equality_diagnostic_both(const PeriodicMesh& mesh, const Vec& y) {
  if (mesh.frame != Frame::AmbientSphere)
    throw std::invalid_argument("equality_diagnostic: needs the ambient-sphere mean curvature");
  ConformalState state(y);
  EqualityResidual out;
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    const PointGeometry& pg = mesh.vertex_geometry[i];
    const double f = state.f(pg.x);
    const Vec zn = normal_component(mesh, i, state.z);
    const Vec yn = normal_component(mesh, i, state.y);
    out.z_form = std::max(out.z_form, (pg.mean_curv + zn / f).norm());
    out.y_form = std::max(out.y_form, (pg.mean_curv + yn / f).norm());
  }
  return out;
}

double equality_diagnostic(const PeriodicMesh& mesh, const Vec& y) {
  return equality_diagnostic_both(mesh, y).z_form;
}

}  // namespace sg
