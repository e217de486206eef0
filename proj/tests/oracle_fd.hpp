#pragma once

// Finite-difference cross-checks for the analytic geometry evaluators. These
// deliberately avoid the library's projection helpers: the normal projector is
// built from a least-squares solve so that agreement is an independent check.

#include <Eigen/Dense>
#include <array>

#include "sg/surface.hpp"

namespace sg::testing {

inline Vec fd_xu(const Surface& s, double u, double v, double h = 1e-5) {
  return (s.position(u + h, v) - s.position(u - h, v)) / (2 * h);
}

inline Vec fd_xv(const Surface& s, double u, double v, double h = 1e-5) {
  return (s.position(u, v + h) - s.position(u, v - h)) / (2 * h);
}

struct FdGeometry {
  Eigen::Matrix2d metric;
  std::array<Vec, 3> sff;  // normal parts of x_uu, x_uv, x_vv (sphere frame)
  Vec mean_curv;
  double sff_norm_sq = 0;
};

inline FdGeometry fd_point_geometry(const Surface& s, double u, double v, double h = 1e-4) {
  const Vec x = s.position(u, v);
  const Vec xu = fd_xu(s, u, v);
  const Vec xv = fd_xv(s, u, v);
  const Vec xuu = (s.position(u + h, v) - 2 * x + s.position(u - h, v)) / (h * h);
  const Vec xvv = (s.position(u, v + h) - 2 * x + s.position(u, v - h)) / (h * h);
  const Vec xuv = (s.position(u + h, v + h) - s.position(u + h, v - h) -
                   s.position(u - h, v + h) + s.position(u - h, v - h)) /
                  (4 * h * h);

  FdGeometry g;
  g.metric(0, 0) = xu.dot(xu);
  g.metric(0, 1) = g.metric(1, 0) = xu.dot(xv);
  g.metric(1, 1) = xv.dot(xv);

  Eigen::MatrixXd span(x.size(), 3);
  span.col(0) = x;
  span.col(1) = xu;
  span.col(2) = xv;
  auto normal_part = [&](const Vec& w) -> Vec {
    // w minus its least-squares projection onto the span.
    return w - span * (span.colPivHouseholderQr().solve(w));
  };
  g.sff = {normal_part(xuu), normal_part(xuv), normal_part(xvv)};

  const Eigen::Matrix2d gi = g.metric.inverse();
  g.mean_curv = 0.5 * (gi(0, 0) * g.sff[0] + 2 * gi(0, 1) * g.sff[1] + gi(1, 1) * g.sff[2]);
  auto at = [&](int i, int j) -> const Vec& { return g.sff[i + j]; };
  g.sff_norm_sq = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          g.sff_norm_sq += gi(i, k) * gi(j, l) * at(i, j).dot(at(k, l));
  return g;
}

// Intrinsic Gaussian curvature via the Brioschi formula, with the metric
// coefficients differentiated by central differences.
inline double brioschi_gauss_curv(const Surface& s, double u, double v, double h = 1e-4) {
  auto efg = [&](double uu, double vv) {
    Vec xu, xv;
    s.first_partials(uu, vv, xu, xv);
    return Eigen::Vector3d(xu.dot(xu), xu.dot(xv), xv.dot(xv));
  };
  const Eigen::Vector3d c = efg(u, v);
  const Eigen::Vector3d cu = (efg(u + h, v) - efg(u - h, v)) / (2 * h);
  const Eigen::Vector3d cv = (efg(u, v + h) - efg(u, v - h)) / (2 * h);
  const Eigen::Vector3d cvv = (efg(u, v + h) - 2 * c + efg(u, v - h)) / (h * h);
  const Eigen::Vector3d cuu = (efg(u + h, v) - 2 * c + efg(u - h, v)) / (h * h);
  const Eigen::Vector3d cuv = (efg(u + h, v + h) - efg(u + h, v - h) - efg(u - h, v + h) +
                               efg(u - h, v - h)) /
                              (4 * h * h);
  const double E = c[0], F = c[1], G = c[2];
  Eigen::Matrix3d m1, m2;
  m1 << -0.5 * cvv[0] + cuv[1] - 0.5 * cuu[2], 0.5 * cu[0], cu[1] - 0.5 * cv[0],
      cv[1] - 0.5 * cu[2], E, F,
      0.5 * cv[2], F, G;
  m2 << 0.0, 0.5 * cv[0], 0.5 * cu[2],
      0.5 * cv[0], E, F,
      0.5 * cu[2], F, G;
  const double det_g = E * G - F * F;
  return (m1.determinant() - m2.determinant()) / (det_g * det_g);
}

}  // namespace sg::testing
