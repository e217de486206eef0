#pragma once

#include "sg/mesh.hpp"

namespace sg {

// A Moebius transformation of S^n indexed by a point y of the open unit
// ball, together with the derived quantities used by the area estimates:
// z = 2y/(1+|y|^2), f(x) = 1 + <x,z>, rho_y(x) = (1-|y|^2)/|x+y|^2.
// These satisfy (1-|z|^2)/f(x)^2 = rho_y(x)^2 on the unit sphere.
struct ConformalState {
  Vec y;
  Vec z;
  double y_norm_sq = 0.0;

  explicit ConformalState(const Vec& y_in);  // requires |y| < 1

  double f(const Vec& x) const { return 1.0 + x.dot(z); }
  double rho(const Vec& x) const { return (1.0 - y_norm_sq) / (x + y).squaredNorm(); }
};

// F_y(x) = rho_y(x) (x + y) + y; maps the unit sphere to itself.
Vec conformal_map(const ConformalState& state, const Vec& x);

// Area of the conformal image: vertex-lumped quadrature of rho_y^2.
double conformal_area(const PeriodicMesh& mesh, const Vec& y);

// Integral of 1 + |H|^2 (mean curvature in the round sphere); requires a
// sphere-frame mesh.
double willmore_energy(const PeriodicMesh& mesh);

struct BalanceResult {
  Vec y;                 // balancing point, |y| < 1
  double residual = 0.0;  // |weighted mean of F_y(x_i)| / total weight
  int iterations = 0;
};

// Finds y so the (weights x mass)-weighted center of mass of F_y(x_i)
// vanishes (damped Newton, finite-difference Jacobian). Weights must be
// strictly positive. Throws NonConvergenceError when Newton stalls or the
// iterate keeps escaping toward the boundary (measure concentration).
BalanceResult balance(const PeriodicMesh& mesh, const Vec& weights, double tol = 1e-8,
                      int max_iter = 60);

// Component of v orthogonal to span{x, tangents} at a mesh vertex: the part
// of v normal to the surface and tangent to the ambient sphere.
Vec normal_component(const PeriodicMesh& mesh, int vertex, const Vec& v);

// Residuals of the conformal-area equality configuration: the sup over
// vertices of |H + w^N / f| where w is z (primary form) or y itself
// (the alternative normalization); both are reported.
struct EqualityResidual {
  double z_form = 0.0;
  double y_form = 0.0;
};

double equality_diagnostic(const PeriodicMesh& mesh, const Vec& y);  // z-form
EqualityResidual equality_diagnostic_both(const PeriodicMesh& mesh, const Vec& y);

}  // namespace sg
