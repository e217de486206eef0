#include "sg/surface.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sg/product.hpp"

namespace sg {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

LatticeDomain square_lattice(double period_u, double period_v) {
  LatticeDomain d;
  d.basis << period_u, 0.0, 0.0, period_v;
  return d;
}

}  // namespace

void LatticeDomain::validate() const {
  if (std::abs(basis.determinant()) <= 0.0)
    throw std::invalid_argument("LatticeDomain: basis vectors are linearly dependent");
  if (resolution[0] < 3 || resolution[1] < 3)
    throw std::invalid_argument("LatticeDomain: resolution must be >= 3 per axis");
}

Surface::Surface(std::string name, int ambient_dim, AmbientKind kind, LatticeDomain dom,
                 bool sphere_chart)
    : name_(std::move(name)),
      ambient_dim_(ambient_dim),
      kind_(kind),
      domain_(dom),
      sphere_chart_(sphere_chart) {
  domain_.validate();
}

ProductGeometry Surface::product_geometry() const {
  throw std::logic_error("surface '" + name_ + "' is not immersed in a product ambient");
}

// ---- Clifford torus -------------------------------------------------------

namespace {

class CliffordTorus final : public Surface {
public:
  CliffordTorus()
      : Surface("clifford", 4, AmbientKind::RoundSphere, square_lattice(kTwoPi, kTwoPi)) {}

  Vec position(double u, double v) const override {
    Vec x(4);
    const double c = 1.0 / std::sqrt(2.0);
    x << std::cos(u) * c, std::sin(u) * c, std::cos(v) * c, std::sin(v) * c;
    return x;
  }

  void first_partials(double u, double v, Vec& xu, Vec& xv) const override {
    const double c = 1.0 / std::sqrt(2.0);
    xu.resize(4);
    xv.resize(4);
    xu << -std::sin(u) * c, std::cos(u) * c, 0.0, 0.0;
    xv << 0.0, 0.0, -std::sin(v) * c, std::cos(v) * c;
  }

  void second_partials(double u, double v, Vec& xuu, Vec& xuv, Vec& xvv) const override {
    const double c = 1.0 / std::sqrt(2.0);
    xuu.resize(4);
    xuv = Vec::Zero(4);
    xvv.resize(4);
    xuu << -std::cos(u) * c, -std::sin(u) * c, 0.0, 0.0;
    xvv << 0.0, 0.0, -std::cos(v) * c, -std::sin(v) * c;
  }
};

// ---- Equilateral torus ----------------------------------------------------

// Minimal immersion of the hexagonal flat torus into S^5; the lattice shear
// is carried by the constant induced metric (1/3)[[2,1],[1,2]].
class EquilateralTorus final : public Surface {
public:
  EquilateralTorus()
      : Surface("equilateral", 6, AmbientKind::RoundSphere, square_lattice(kTwoPi, kTwoPi)) {}

  Vec position(double u, double v) const override {
    Vec x(6);
    const double c = 1.0 / std::sqrt(3.0);
    const double w = u + v;
    x << std::cos(u) * c, std::sin(u) * c, std::cos(v) * c, std::sin(v) * c, std::cos(w) * c,
        -std::sin(w) * c;
    return x;
  }

  void first_partials(double u, double v, Vec& xu, Vec& xv) const override {
    const double c = 1.0 / std::sqrt(3.0);
    const double w = u + v;
    xu.resize(6);
    xv.resize(6);
    xu << -std::sin(u) * c, std::cos(u) * c, 0.0, 0.0, -std::sin(w) * c, -std::cos(w) * c;
    xv << 0.0, 0.0, -std::sin(v) * c, std::cos(v) * c, -std::sin(w) * c, -std::cos(w) * c;
  }

  void second_partials(double u, double v, Vec& xuu, Vec& xuv, Vec& xvv) const override {
    const double c = 1.0 / std::sqrt(3.0);
    const double w = u + v;
    Vec mixed(6);
    mixed << 0.0, 0.0, 0.0, 0.0, -std::cos(w) * c, std::sin(w) * c;
    xuu = mixed;
    xuu[0] = -std::cos(u) * c;
    xuu[1] = -std::sin(u) * c;
    xuv = mixed;
    xvv = mixed;
    xvv[2] = -std::cos(v) * c;
    xvv[3] = -std::sin(v) * c;
  }
};

// ---- Flat tori in S^1(r) x S^2(s) -----------------------------------------

class Section5Torus final : public Surface {
public:
  Section5Torus(double r, double t, double h)
      : Surface("section5", 5, AmbientKind::ProductS1xS2, square_lattice(kTwoPi, kTwoPi)),
        r_(r),
        t_(t),
        h_(h) {}

  Vec position(double u, double v) const override {
    Vec x(5);
    x << r_ * std::cos(u), r_ * std::sin(u), t_ * std::cos(v), t_ * std::sin(v), h_;
    return x;
  }

  void first_partials(double u, double v, Vec& xu, Vec& xv) const override {
    xu = Vec::Zero(5);
    xv = Vec::Zero(5);
    xu[0] = -r_ * std::sin(u);
    xu[1] = r_ * std::cos(u);
    xv[2] = -t_ * std::sin(v);
    xv[3] = t_ * std::cos(v);
  }

  void second_partials(double u, double v, Vec& xuu, Vec& xuv, Vec& xvv) const override {
    xuu = Vec::Zero(5);
    xuv = Vec::Zero(5);
    xvv = Vec::Zero(5);
    xuu[0] = -r_ * std::cos(u);
    xuu[1] = -r_ * std::sin(u);
    xvv[2] = -t_ * std::cos(v);
    xvv[3] = -t_ * std::sin(v);
  }

  ProductGeometry product_geometry() const override { return ProductGeometry(r_); }

private:
  double r_, t_, h_;
};

// ---- Great 2-sphere -------------------------------------------------------

class GreatSphere final : public Surface {
public:
  explicit GreatSphere(int n)
      : Surface("sphere", n + 1, AmbientKind::RoundSphere, square_lattice(kTwoPi, M_PI),
                /*sphere_chart=*/true) {}

  Vec position(double u, double v) const override {
    Vec x = Vec::Zero(ambient_dim());
    x[0] = std::cos(u) * std::sin(v);
    x[1] = std::sin(u) * std::sin(v);
    x[2] = std::cos(v);
    return x;
  }

  void first_partials(double u, double v, Vec& xu, Vec& xv) const override {
    xu = Vec::Zero(ambient_dim());
    xv = Vec::Zero(ambient_dim());
    xu[0] = -std::sin(u) * std::sin(v);
    xu[1] = std::cos(u) * std::sin(v);
    xv[0] = std::cos(u) * std::cos(v);
    xv[1] = std::sin(u) * std::cos(v);
    xv[2] = -std::sin(v);
  }

  void second_partials(double u, double v, Vec& xuu, Vec& xuv, Vec& xvv) const override {
    xuu = Vec::Zero(ambient_dim());
    xuv = Vec::Zero(ambient_dim());
    xuu[0] = -std::cos(u) * std::sin(v);
    xuu[1] = -std::sin(u) * std::sin(v);
    xuv[0] = -std::sin(u) * std::cos(v);
    xuv[1] = std::cos(u) * std::cos(v);
    xvv = -position(u, v);
  }
};

// ---- Lawson torus ---------------------------------------------------------

class LawsonTorus31 final : public Surface {
public:
  LawsonTorus31()
      : Surface("lawson31", 4, AmbientKind::RoundSphere, square_lattice(kTwoPi, kTwoPi)) {}

  Vec position(double x, double y) const override {
    Vec p(4);
    p << std::cos(3 * x) * std::cos(y), std::sin(3 * x) * std::cos(y),
        std::cos(x) * std::sin(y), std::sin(x) * std::sin(y);
    return p;
  }

  void first_partials(double x, double y, Vec& px, Vec& py) const override {
    px.resize(4);
    py.resize(4);
    px << -3 * std::sin(3 * x) * std::cos(y), 3 * std::cos(3 * x) * std::cos(y),
        -std::sin(x) * std::sin(y), std::cos(x) * std::sin(y);
    py << -std::cos(3 * x) * std::sin(y), -std::sin(3 * x) * std::sin(y),
        std::cos(x) * std::cos(y), std::sin(x) * std::cos(y);
  }

  void second_partials(double x, double y, Vec& pxx, Vec& pxy, Vec& pyy) const override {
    pxx.resize(4);
    pxy.resize(4);
    pyy.resize(4);
    pxx << -9 * std::cos(3 * x) * std::cos(y), -9 * std::sin(3 * x) * std::cos(y),
        -std::cos(x) * std::sin(y), -std::sin(x) * std::sin(y);
    pxy << 3 * std::sin(3 * x) * std::sin(y), -3 * std::cos(3 * x) * std::sin(y),
        -std::sin(x) * std::cos(y), std::cos(x) * std::cos(y);
    pyy << -std::cos(3 * x) * std::cos(y), -std::sin(3 * x) * std::cos(y),
        -std::cos(x) * std::sin(y), -std::sin(x) * std::sin(y);
  }
};

// ---- Bipolar surface ------------------------------------------------------

// psi~ = psi ^ psi*, with psi* the Gauss map of a surface in S^3. Position and
// first partials are exact; second partials are central differences of the
// exact first partials (the Gauss map derivative already consumes the base
// surface's second partials).
class BipolarSurface final : public Surface {
public:
  explicit BipolarSurface(SurfacePtr base)
      : Surface("bipolar-" + base->name(), 6, AmbientKind::RoundSphere, base->domain()),
        base_(std::move(base)) {}

  Vec position(double u, double v) const override {
    Gauss g = gauss_map(u, v);
    return wedge2(g.psi, g.star);
  }

  void first_partials(double u, double v, Vec& xu, Vec& xv) const override {
    Gauss g = gauss_map(u, v);
    xu = wedge2(g.psi_u, g.star) + wedge2(g.psi, g.star_u);
    xv = wedge2(g.psi_v, g.star) + wedge2(g.psi, g.star_v);
  }

  void second_partials(double u, double v, Vec& xuu, Vec& xuv, Vec& xvv) const override {
    const double h = kFdStep;
    Vec xu_p, xv_p, xu_m, xv_m;
    first_partials(u + h, v, xu_p, xv_p);
    first_partials(u - h, v, xu_m, xv_m);
    xuu = (xu_p - xu_m) / (2 * h);
    Vec dxv_du = (xv_p - xv_m) / (2 * h);
    first_partials(u, v + h, xu_p, xv_p);
    first_partials(u, v - h, xu_m, xv_m);
    xvv = (xv_p - xv_m) / (2 * h);
    Vec dxu_dv = (xu_p - xu_m) / (2 * h);
    xuv = 0.5 * (dxv_du + dxu_dv);
  }

private:
  static constexpr double kFdStep = 5e-6;

  struct Gauss {
    Eigen::Vector4d psi, psi_u, psi_v;  // base immersion and tangents
    Eigen::Vector4d star, star_u, star_v;  // unit normal in S^3 and derivatives
  };

  Gauss gauss_map(double u, double v) const {
    Vec p = base_->position(u, v);
    Vec pu, pv, puu, puv, pvv;
    base_->first_partials(u, v, pu, pv);
    base_->second_partials(u, v, puu, puv, pvv);

    Vec c = hodge_complement({p, pu, pv});
    const double n = c.norm();
    if (n < 1e-12) {
      std::ostringstream msg;
      msg << "bipolar: Gauss map undefined (degenerate tangent frame) at (" << u << ", " << v
          << ")";
      throw std::domain_error(msg.str());
    }
    Vec cu = hodge_complement({p, puu, pv}) + hodge_complement({p, pu, puv});
    Vec cv = hodge_complement({p, puv, pv}) + hodge_complement({p, pu, pvv});

    Gauss g;
    g.psi = p;
    g.psi_u = pu;
    g.psi_v = pv;
    g.star = c / n;
    g.star_u = cu / n - c * (c.dot(cu) / (n * n * n));
    g.star_v = cv / n - c * (c.dot(cv) / (n * n * n));
    return g;
  }

  SurfacePtr base_;
};

}  // namespace

// ---- factories ------------------------------------------------------------

SurfacePtr clifford_torus() { return std::make_shared<CliffordTorus>(); }

SurfacePtr equilateral_torus() { return std::make_shared<EquilateralTorus>(); }

SurfacePtr section5_torus(double r, double t, double h) {
  if (!(r > 0.0) || !(t > 0.0))
    throw std::invalid_argument("section5_torus: radii r and t must be positive");
  const double norm = r * r + t * t + h * h;
  if (std::abs(norm - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "section5_torus: parameters must satisfy r^2 + t^2 + h^2 = 1 (got " << norm << ")";
    throw std::invalid_argument(msg.str());
  }
  return std::make_shared<Section5Torus>(r, t, h);
}

SurfacePtr great_sphere(int n) {
  if (n < 2) throw std::invalid_argument("great_sphere: ambient dimension must be >= 2");
  return std::make_shared<GreatSphere>(n);
}

SurfacePtr lawson_torus_31() { return std::make_shared<LawsonTorus31>(); }

SurfacePtr bipolar(SurfacePtr base) {
  if (!base) throw std::invalid_argument("bipolar: null base surface");
  if (base->ambient_dim() != 4)
    throw std::invalid_argument("bipolar: base surface must lie in S^3 (ambient dimension 4)");
  return std::make_shared<BipolarSurface>(std::move(base));
}

SurfacePtr make_surface(const std::string& name, const std::map<std::string, double>& params) {
  auto get = [&params](const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  if (name == "clifford") return clifford_torus();
  if (name == "equilateral") return equilateral_torus();
  if (name == "section5")
    return section5_torus(get("r", 0.6), get("t", 0.48), get("h", 0.64));
  if (name == "sphere") return great_sphere(static_cast<int>(get("n", 3)));
  if (name == "lawson31") return lawson_torus_31();
  if (name == "bipolar-lawson31") return bipolar(lawson_torus_31());
  throw std::invalid_argument("unknown surface '" + name + "'");
}

// ---- pointwise geometry ---------------------------------------------------

namespace {

// Index of the symmetric pair (i,j) in the storage order uu, uv, vv.
inline int sym_index(int i, int j) { return i + j; }

double form_norm_sq(const std::array<Vec, 3>& form, const Eigen::Matrix2d& ginv) {
  double total = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          total += ginv(i, k) * ginv(j, l) * form[sym_index(i, j)].dot(form[sym_index(k, l)]);
  return total;
}

Vec half_trace(const std::array<Vec, 3>& form, const Eigen::Matrix2d& ginv) {
  return 0.5 * (ginv(0, 0) * form[0] + 2.0 * ginv(0, 1) * form[1] + ginv(1, 1) * form[2]);
}

}  // namespace

PointGeometry point_geometry(const Surface& s, double u, double v, Frame frame) {
  PointGeometry pg;
  pg.x = s.position(u, v);
  s.first_partials(u, v, pg.xu, pg.xv);
  Vec xuu, xuv, xvv;
  s.second_partials(u, v, xuu, xuv, xvv);

  Eigen::Matrix2d g;
  g(0, 0) = pg.xu.dot(pg.xu);
  g(0, 1) = g(1, 0) = pg.xu.dot(pg.xv);
  g(1, 1) = pg.xv.dot(pg.xv);
  const double det = g.determinant();
  if (!(det > 0.0)) {
    std::ostringstream msg;
    msg << "point_geometry: degenerate metric (det g = " << det << ") on '" << s.name()
        << "' at (" << u << ", " << v << ")";
    throw std::domain_error(msg.str());
  }
  pg.metric = g;
  pg.area_density = std::sqrt(det);
  Eigen::Matrix2d ginv = g.inverse();

  // Orthonormal frame of span{x, T Sigma}; x is unit and perpendicular to the
  // tangents for sphere-valued immersions, but we orthogonalize anyway.
  Vec t1 = pg.xu.normalized();
  Vec t2 = pg.xv - t1.dot(pg.xv) * t1;
  t2 -= t1.dot(t2) * t1;
  t2.normalize();
  std::vector<Vec> span{pg.x, t1, t2};

  // Second fundamental form in the round sphere: normal part of the ambient
  // second partials.
  std::array<Vec, 3> tau{project_out(xuu, span), project_out(xuv, span), project_out(xvv, span)};
  Vec mean_tau = half_trace(tau, ginv);
  const double tau_norm_sq = form_norm_sq(tau, ginv);
  // Gauss equation for a surface in the unit sphere.
  const double k_gauss = (2.0 + 4.0 * mean_tau.squaredNorm() - tau_norm_sq) / 2.0;

  if (frame == Frame::AmbientSphere) {
    pg.sff = tau;
    pg.mean_curv = mean_tau;
    pg.sff_norm_sq = tau_norm_sq;
    pg.gauss_curv = k_gauss;
    pg.potential = tau_norm_sq + 2.0;
    return pg;
  }

  if (s.ambient_kind() != AmbientKind::ProductS1xS2)
    throw std::invalid_argument("point_geometry: product frame requires a product-ambient surface");

  ProductGeometry prod = s.product_geometry();
  Vec nu = prod.nu(pg.x);
  // tau = rho + sigma: remove the component along the normal of M in S^4.
  std::array<Vec, 3> sigma;
  for (int i = 0; i < 3; ++i) sigma[i] = tau[i] - nu.dot(tau[i]) * nu;

  // Unit normal of Sigma inside M, oriented so that the flat tori of the
  // catalog have nonnegative principal curvature along the S^2 factor.
  Vec n_in_m = -hodge_complement({pg.x, t1, t2, nu});
  n_in_m.normalize();

  pg.sff = sigma;
  pg.mean_curv = half_trace(sigma, ginv);
  pg.sff_norm_sq = form_norm_sq(sigma, ginv);
  pg.gauss_curv = k_gauss;
  pg.product_normal = nu;
  pg.surface_normal_in_m = n_in_m;
  pg.ric_normal = ric_product(prod, n_in_m);
  pg.potential = pg.sff_norm_sq + pg.ric_normal;
  return pg;
}

}  // namespace sg
