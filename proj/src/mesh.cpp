#include "sg/mesh.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sg/errors.hpp"

namespace sg {

namespace {

Eigen::Matrix2d metric_at(const Surface& s, double u, double v) {
  Vec xu, xv;
  s.first_partials(u, v, xu, xv);
  Eigen::Matrix2d g;
  g(0, 0) = xu.dot(xu);
  g(0, 1) = g(1, 0) = xu.dot(xv);
  g(1, 1) = xv.dot(xv);
  return g;
}

double area_density_at(const Surface& s, double u, double v) {
  const double det = metric_at(s, u, v).determinant();
  return det > 0.0 ? std::sqrt(det) : 0.0;
}

double edge_length(const Surface& s, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d mid = 0.5 * (a + b);
  const Eigen::Vector2d d = b - a;
  const double q = d.dot(metric_at(s, mid[0], mid[1]) * d);
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

// Midpoint (edge-midpoint) rule for the metric area of a parameter triangle;
// exact for constant area density, second order otherwise.
double triangle_area(const Surface& s, const std::array<Eigen::Vector2d, 3>& p) {
  const Eigen::Vector2d e1 = p[1] - p[0];
  const Eigen::Vector2d e2 = p[2] - p[0];
  const double param_area = 0.5 * std::abs(e1[0] * e2[1] - e1[1] * e2[0]);
  double density = 0.0;
  for (int c = 0; c < 3; ++c) {
    const Eigen::Vector2d mid = 0.5 * (p[(c + 1) % 3] + p[(c + 2) % 3]);
    density += area_density_at(s, mid[0], mid[1]);
  }
  return param_area * density / 3.0;
}

// 2x2 Gauss-Legendre integral of the area density over a parameter rectangle.
double rect_area(const Surface& s, double u0, double u1, double v0, double v1) {
  static const double g = 1.0 / std::sqrt(3.0);
  const double cu = 0.5 * (u0 + u1), hu = 0.5 * (u1 - u0);
  const double cv = 0.5 * (v0 + v1), hv = 0.5 * (v1 - v0);
  double total = 0.0;
  for (int a : {-1, 1})
    for (int b : {-1, 1}) total += area_density_at(s, cu + a * g * hu, cv + b * g * hv);
  return total * hu * hv;
}

void require_positive_heron(const std::array<double, 3>& l, int tri_index) {
  const double sort0 = std::max({l[0], l[1], l[2]});
  const double peri = l[0] + l[1] + l[2];
  const double semi = 0.5 * peri;
  const double arg =
      semi * (semi - l[0]) * (semi - l[1]) * (semi - l[2]);
  if (!(arg > 0.0) || !(sort0 < semi)) {
    std::ostringstream msg;
    msg << "triangulate: degenerate metric triangle " << tri_index << " (edge lengths " << l[0]
        << ", " << l[1] << ", " << l[2] << ")";
    throw MeshQualityError(msg.str());
  }
}

}  // namespace

int PeriodicMesh::num_edges() const {
  std::set<std::pair<int, int>> edges;
  for (const auto& t : triangles)
    for (int c = 0; c < 3; ++c) {
      int a = t[c], b = t[(c + 1) % 3];
      edges.emplace(std::min(a, b), std::max(a, b));
    }
  return static_cast<int>(edges.size());
}

int PeriodicMesh::euler_characteristic() const {
  return num_vertices() - num_edges() + num_triangles();
}

double PeriodicMesh::total_area() const {
  double a = 0.0;
  for (double t : tri_area) a += t;
  return a;
}

int PeriodicMesh::grid_index(int i, int j) const {
  const int n1 = res[0], n2 = res[1];
  auto wrap = [](int a, int n) {
    int m = a % n;
    return m < 0 ? m + n : m;
  };
  if (!surface->is_sphere_chart()) return wrap(j, n2) * n1 + wrap(i, n1);
  // Sphere chart: rows 1..n2-1 are rings, j = 0 and j = n2 are the poles.
  if (j <= 0) return n1 * (n2 - 1);      // north pole vertex
  if (j >= n2) return n1 * (n2 - 1) + 1;  // south pole vertex
  return (j - 1) * n1 + wrap(i, n1);
}

PeriodicMesh triangulate(SurfacePtr surface, std::array<int, 2> res, Frame frame) {
  if (!surface) throw std::invalid_argument("triangulate: null surface");
  if (res[0] < 3 || res[1] < 3)
    throw std::invalid_argument("triangulate: resolution must be >= 3 per axis");

  PeriodicMesh mesh;
  mesh.surface = surface;
  mesh.frame = frame;
  mesh.res = res;
  const int n1 = res[0], n2 = res[1];
  const Eigen::Matrix2d basis = surface->domain().basis;

  auto param_of = [&](int i, int j) -> Eigen::Vector2d {
    return basis * Eigen::Vector2d(static_cast<double>(i) / n1, static_cast<double>(j) / n2);
  };

  if (!surface->is_sphere_chart()) {
    mesh.vertex_params.reserve(static_cast<size_t>(n1) * n2);
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i) mesh.vertex_params.push_back(param_of(i, j));

    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i) {
        // Cell corners, unwrapped; the split diagonal is the same everywhere.
        const Eigen::Vector2d p00 = param_of(i, j), p10 = param_of(i + 1, j);
        const Eigen::Vector2d p01 = param_of(i, j + 1), p11 = param_of(i + 1, j + 1);
        const int v00 = mesh.grid_index(i, j), v10 = mesh.grid_index(i + 1, j);
        const int v01 = mesh.grid_index(i, j + 1), v11 = mesh.grid_index(i + 1, j + 1);
        mesh.triangles.push_back({v00, v10, v01});
        mesh.corner_params.push_back({p00, p10, p01});
        mesh.triangles.push_back({v10, v11, v01});
        mesh.corner_params.push_back({p10, p11, p01});
      }
  } else {
    if (std::abs(basis(0, 1)) > 1e-14 || std::abs(basis(1, 0)) > 1e-14)
      throw std::invalid_argument("triangulate: sphere charts require an axis-aligned domain");
    const double v_max = basis(1, 1);
    const double delta = 1e-3 * v_max / n2;  // pole inset: no vertex at the singularity

    for (int j = 1; j < n2; ++j)
      for (int i = 0; i < n1; ++i) mesh.vertex_params.push_back(param_of(i, j));
    mesh.vertex_params.emplace_back(0.0, delta);          // north
    mesh.vertex_params.emplace_back(0.0, v_max - delta);  // south

    // Interior latitude bands, meshed like the torus case.
    for (int j = 1; j < n2 - 1; ++j)
      for (int i = 0; i < n1; ++i) {
        const Eigen::Vector2d p00 = param_of(i, j), p10 = param_of(i + 1, j);
        const Eigen::Vector2d p01 = param_of(i, j + 1), p11 = param_of(i + 1, j + 1);
        const int v00 = mesh.grid_index(i, j), v10 = mesh.grid_index(i + 1, j);
        const int v01 = mesh.grid_index(i, j + 1), v11 = mesh.grid_index(i + 1, j + 1);
        mesh.triangles.push_back({v00, v10, v01});
        mesh.corner_params.push_back({p00, p10, p01});
        mesh.triangles.push_back({v10, v11, v01});
        mesh.corner_params.push_back({p10, p11, p01});
      }
    // Pole fans. The pole corner is parameterized at the sector's central
    // meridian; the sector's full curved area is assigned at quadrature time.
    const int north = mesh.grid_index(0, 0), south = mesh.grid_index(0, n2);
    for (int i = 0; i < n1; ++i) {
      const Eigen::Vector2d a = param_of(i, 1), b = param_of(i + 1, 1);
      const double umid = 0.5 * (a[0] + b[0]);
      mesh.triangles.push_back({north, mesh.grid_index(i + 1, 1), mesh.grid_index(i, 1)});
      mesh.corner_params.push_back({Eigen::Vector2d(umid, delta), b, a});

      const Eigen::Vector2d c = param_of(i, n2 - 1), d = param_of(i + 1, n2 - 1);
      mesh.triangles.push_back({south, mesh.grid_index(i, n2 - 1), mesh.grid_index(i + 1, n2 - 1)});
      mesh.corner_params.push_back({Eigen::Vector2d(umid, v_max - delta), c, d});
    }
  }

  // Vertex geometry (throws std::domain_error at non-immersive points).
  mesh.vertex_geometry.reserve(mesh.vertex_params.size());
  for (const auto& p : mesh.vertex_params)
    mesh.vertex_geometry.push_back(point_geometry(*surface, p[0], p[1], frame));

  // Metric edge lengths, validity, and quadrature areas.
  const int nt = mesh.num_triangles();
  mesh.tri_edge_len.resize(nt);
  mesh.tri_area.resize(nt);
  const int n_regular = surface->is_sphere_chart() ? nt - 2 * n1 : nt;
  for (int t = 0; t < nt; ++t) {
    const auto& p = mesh.corner_params[t];
    std::array<double, 3> l;
    for (int c = 0; c < 3; ++c) l[c] = edge_length(*surface, p[(c + 1) % 3], p[(c + 2) % 3]);
    require_positive_heron(l, t);
    mesh.tri_edge_len[t] = l;
    if (t < n_regular) {
      mesh.tri_area[t] = triangle_area(*surface, p);
    } else {
      // Pole fan: the triangle closes the whole parameter sector between its
      // two ring corners, so integrate the density over that rectangle.
      const double u0 = std::min(p[1][0], p[2][0]), u1 = std::max(p[1][0], p[2][0]);
      const double v_ring = p[1][1], v_pole = p[0][1];
      mesh.tri_area[t] = rect_area(*surface, u0, u1, std::min(v_pole, v_ring),
                                   std::max(v_pole, v_ring));
    }
    if (!(mesh.tri_area[t] > 0.0)) {
      std::ostringstream msg;
      msg << "triangulate: nonpositive area for triangle " << t;
      throw MeshQualityError(msg.str());
    }
  }
  return mesh;
}

void export_off(const PeriodicMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_off: cannot open '" + path + "'");
  const int dim = mesh.surface->ambient_dim();
  if (dim == 3)
    out << "OFF\n";
  else
    out << "nOFF\n" << dim << "\n";
  out << mesh.num_vertices() << " " << mesh.num_triangles() << " " << mesh.num_edges() << "\n";
  out.precision(17);
  for (const auto& g : mesh.vertex_geometry) {
    for (int c = 0; c < dim; ++c) out << g.x[c] << (c + 1 < dim ? ' ' : '\n');
  }
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  if (!out) throw std::runtime_error("export_off: write failed for '" + path + "'");
}

}  // namespace sg
