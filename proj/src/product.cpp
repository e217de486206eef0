#include "sg/product.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sg {

ProductGeometry::ProductGeometry(double r_in) : r(r_in) {
  if (!(r > 0.0) || !(r < 1.0))
    throw std::invalid_argument("ProductGeometry: radius must satisfy 0 < r < 1");
  s = std::sqrt(1.0 - r * r);
}

Vec ProductGeometry::nu(const Vec& p) const {
  require_on_m(p);
  Vec out(5);
  out.head<2>() = -(s / r) * p.head<2>();
  out.tail<3>() = (r / s) * p.tail<3>();
  return out;
}

Vec ProductGeometry::e1(const Vec& p) const {
  require_on_m(p);
  Vec out = Vec::Zero(5);
  out[0] = -p[1] / r;
  out[1] = p[0] / r;
  return out;
}

void ProductGeometry::require_on_m(const Vec& p, double tol) const {
  if (p.size() != 5)
    throw std::invalid_argument("ProductGeometry: points live in R^2 x R^3");
  const double da = std::abs(p.head<2>().norm() - r);
  const double db = std::abs(p.tail<3>().norm() - s);
  if (da > tol || db > tol) {
    std::ostringstream msg;
    msg << "ProductGeometry: point off S^1(" << r << ") x S^2(" << s << ") by (" << da << ", "
        << db << ")";
    throw std::invalid_argument(msg.str());
  }
}

void ProductGeometry::require_tangent(const Vec& p, const Vec& X, double tol) const {
  require_on_m(p, tol);
  if (X.size() != 5)
    throw std::invalid_argument("ProductGeometry: tangent vectors live in R^2 x R^3");
  const double scale = 1.0 + X.norm();
  if (std::abs(X.head<2>().dot(p.head<2>())) > tol * scale ||
      std::abs(X.tail<3>().dot(p.tail<3>())) > tol * scale)
    throw std::invalid_argument("ProductGeometry: vector is not tangent to the product at p");
}

Vec product_shape_operator(const ProductGeometry& geom, const Vec& p, const Vec& X) {
  geom.require_tangent(p, X);
  Vec e = geom.e1(p);
  const double a = X.dot(e);
  // A acts with kappa1 on the circle direction and kappa2 on the S^2 block.
  return geom.kappa1() * a * e + geom.kappa2() * (X - a * e);
}

double rho_squared_sigma(const ProductGeometry& geom, const Vec& p, const Vec& X1, const Vec& X2) {
  geom.require_tangent(p, X1);
  geom.require_tangent(p, X2);
  const double tol = 1e-9;
  if (std::abs(X1.norm() - 1.0) > tol || std::abs(X2.norm() - 1.0) > tol ||
      std::abs(X1.dot(X2)) > tol)
    throw std::invalid_argument("rho_squared_sigma: frame {X1, X2} must be orthonormal");

  Vec a1 = product_shape_operator(geom, p, X1);
  Vec a2 = product_shape_operator(geom, p, X2);
  auto normal_part_sq = [&](const Vec& w) {
    Vec perp = w - w.dot(X1) * X1 - w.dot(X2) * X2;
    return perp.squaredNorm();
  };
  return a1.squaredNorm() + a2.squaredNorm() - normal_part_sq(a1) - normal_part_sq(a2);
}

double ric_product(const ProductGeometry& geom, const Vec& N) {
  if (N.size() != 5)
    throw std::invalid_argument("ric_product: normal vectors live in R^2 x R^3");
  if (std::abs(N.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("ric_product: N must be a unit vector");
  // Flat circle factor contributes nothing; the sphere factor has curvature 1/s^2.
  return N.tail<3>().squaredNorm() / (geom.s * geom.s);
}

}  // namespace sg
