#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <memory>
#include <string>

#include "sg/linalg.hpp"

namespace sg {

enum class AmbientKind {
  RoundSphere,   // surface immersed in the unit sphere S^n in R^{n+1}
  ProductS1xS2,  // surface inside S^1(r) x S^2(s), r^2+s^2 = 1, embedded in S^4
};

// Fundamental domain of a doubly periodic parametrization. The basis columns
// are the lattice generators in parameter space.
struct LatticeDomain {
  Eigen::Matrix2d basis = Eigen::Matrix2d::Identity();
  std::array<int, 2> resolution{8, 8};

  void validate() const;  // throws std::invalid_argument
};

struct ProductGeometry;

// A parametric immersion of a torus (or sphere chart) into the unit sphere
// S^n in R^{n+1}. Position and derivative evaluators are pure functions;
// instances are immutable after construction and safe to share across threads.
class Surface {
public:
  virtual ~Surface() = default;

  const std::string& name() const { return name_; }
  int ambient_dim() const { return ambient_dim_; }  // n+1
  AmbientKind ambient_kind() const { return kind_; }
  // True for charts of a 2-sphere: the v-direction is not periodic and the
  // mesh is closed by collapsing the chart boundary toward the poles.
  bool is_sphere_chart() const { return sphere_chart_; }
  const LatticeDomain& domain() const { return domain_; }

  virtual Vec position(double u, double v) const = 0;
  virtual void first_partials(double u, double v, Vec& xu, Vec& xv) const = 0;
  virtual void second_partials(double u, double v, Vec& xuu, Vec& xuv, Vec& xvv) const = 0;

  // Radii of the S^1 x S^2 factors; throws unless ambient_kind is product.
  virtual ProductGeometry product_geometry() const;

protected:
  Surface(std::string name, int ambient_dim, AmbientKind kind, LatticeDomain dom,
          bool sphere_chart = false);

private:
  std::string name_;
  int ambient_dim_;
  AmbientKind kind_;
  LatticeDomain domain_;
  bool sphere_chart_;
};

using SurfacePtr = std::shared_ptr<const Surface>;

// Which normal bundle the second fundamental form refers to.
enum class Frame {
  AmbientSphere,  // sigma of Sigma in the round sphere S^n
  ProductM,       // sigma of Sigma in M = S^1(r) x S^2(s)
};

// Pointwise geometric data of an immersed surface at one parameter point.
struct PointGeometry {
  Vec x;                    // position, |x| = 1
  Vec xu, xv;               // tangent vectors dx/du, dx/dv
  Eigen::Matrix2d metric;   // first fundamental form g
  double area_density = 0;  // sqrt(det g)
  std::array<Vec, 3> sff;   // sigma_uu, sigma_uv, sigma_vv (frame-dependent)
  Vec mean_curv;            // (1/2) g^{ij} sigma_ij
  double sff_norm_sq = 0;   // |sigma|^2 = g^{ik} g^{jl} <sigma_ij, sigma_kl>
  double gauss_curv = 0;    // K, via the Gauss equation in the sphere frame
  double potential = 0;     // zeroth-order term of the stability operator
  // Product-frame extras (zero/empty in the sphere frame):
  Vec product_normal;       // nu, unit normal of M in S^4 at x
  Vec surface_normal_in_m;  // N, unit normal of Sigma in M at x
  double ric_normal = 0;    // Ric_M(N,N)
};

// Computes the full pointwise geometry by projecting ambient second partials
// orthogonally to span{x, xu, xv} (sphere frame) and additionally to the
// product normal nu (product frame). Throws std::domain_error at
// non-immersive parameter points (det g <= 0).
PointGeometry point_geometry(const Surface& s, double u, double v,
                             Frame frame = Frame::AmbientSphere);

// ---- catalog ----

// Flat minimal torus S^1(1/sqrt2) x S^1(1/sqrt2) in S^3.
SurfacePtr clifford_torus();

// Minimal immersion of the hexagonal-lattice flat torus into S^5. Induced
// metric is the constant matrix (1/3) [[2,1],[1,2]].
SurfacePtr equilateral_torus();

// Flat torus (r cos u, r sin u, t cos v, t sin v, h) inside
// S^1(r) x S^2(s), s = sqrt(t^2 + h^2); requires r^2 + t^2 + h^2 = 1.
SurfacePtr section5_torus(double r, double t, double h);

// Totally geodesic S^2 in S^n (n >= 2) via the standard polar chart.
SurfacePtr great_sphere(int n);

// The torus (cos 3x cos y, sin 3x cos y, cos x sin y, sin x sin y) in S^3,
// minimal; parametrized over [0,2pi)^2 (a covering of the image torus).
SurfacePtr lawson_torus_31();

// Wedge of a surface in S^3 with its Gauss map: psi ^ psi*, valued in
// S^5 in Lambda^2(R^4) = R^6. Requires base->ambient_dim() == 4.
SurfacePtr bipolar(SurfacePtr base);

// Surfaces addressed by name: "clifford", "equilateral", "section5",
// "sphere", "lawson31", "bipolar-lawson31". section5 reads r/t/h from
// params (defaults 0.6, 0.48, 0.64).
SurfacePtr make_surface(const std::string& name,
                        const std::map<std::string, double>& params = {});

}  // namespace sg
