#pragma once

#include <Eigen/Dense>

#include "sg/linalg.hpp"

namespace sg {

// Extrinsic data of M = S^1(r) x S^2(s) viewed as a hypersurface of S^4,
// with the normalization r^2 + s^2 = 1. Points of M live in R^2 x R^3 = R^5.
struct ProductGeometry {
  double r = 0;  // radius of the S^1 factor
  double s = 0;  // radius of the S^2 factor, s = sqrt(1 - r^2)

  explicit ProductGeometry(double r_in);

  double kappa1() const { return -s / r; }  // principal curvature along S^1
  double kappa2() const { return r / s; }   // principal curvature along S^2

  // Unit normal of M in S^4 at p = (a,b), a in R^2 (|a|=r), b in R^3 (|b|=s).
  Vec nu(const Vec& p) const;

  // Unit S^1-factor direction at p.
  Vec e1(const Vec& p) const;

  // Checks |a| = r, |b| = s within tol; throws std::invalid_argument.
  void require_on_m(const Vec& p, double tol = 1e-9) const;

  // Checks X is tangent to M at p within tol; throws std::invalid_argument.
  void require_tangent(const Vec& p, const Vec& X, double tol = 1e-9) const;
};

// Weingarten operator of M in S^4 applied to a tangent vector X at p:
// A(X) = kappa1 <X,e1> e1 + kappa2 (X - <X,e1> e1).
Vec product_shape_operator(const ProductGeometry& geom, const Vec& p, const Vec& X);

// Squared norm of the restriction of the second fundamental form of M in S^4
// to a tangent plane span{X1,X2} of a surface through p:
// |rho|^2_Sigma = |A(X1)|^2 + |A(X2)|^2 - sum_i |A(X_i)^perp|^2,
// the perp taken inside T_p M. Requires X1, X2 orthonormal and tangent to M.
double rho_squared_sigma(const ProductGeometry& geom, const Vec& p, const Vec& X1,
                         const Vec& X2);

// Ricci curvature of M in the direction of a unit vector N tangent to M:
// Ric_M(N,N) = |N_{S^2}|^2 / s^2 (the S^1 factor is flat).
double ric_product(const ProductGeometry& geom, const Vec& N);

}  // namespace sg
