#pragma once

#include <array>
#include <string>
#include <vector>

#include "sg/surface.hpp"

namespace sg {

// Triangulation of a surface's fundamental domain with periodic (torus) or
// polar (sphere chart) identification. Vertex data is evaluated once at build
// time; the mesh is immutable afterwards.
//
// Per-triangle corner parameters are stored unwrapped (lattice translates of
// the canonical vertex parameters), so parameter differences across a triangle
// are always small and metric edge lengths are well defined.
struct PeriodicMesh {
  SurfacePtr surface;
  Frame frame = Frame::AmbientSphere;
  std::array<int, 2> res{0, 0};

  std::vector<Eigen::Vector2d> vertex_params;          // canonical (u,v) per vertex
  std::vector<PointGeometry> vertex_geometry;          // same indexing
  std::vector<std::array<int, 3>> triangles;           // vertex index triples
  std::vector<std::array<Eigen::Vector2d, 3>> corner_params;  // unwrapped
  // Length of the edge opposite corner c (i.e. between corners c+1, c+2),
  // measured in the induced metric sampled at the edge midpoint.
  std::vector<std::array<double, 3>> tri_edge_len;
  // Triangle area used for quadrature/mass. Matches the metric (Heron) area
  // except for pole fans of sphere charts, where it is the full sector area.
  std::vector<double> tri_area;

  int num_vertices() const { return static_cast<int>(vertex_params.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_edges() const;
  int euler_characteristic() const;  // V - E + F
  double total_area() const;

  // Identification map of the vertex grid: (i, j) with arbitrary integer
  // offsets resolves to the canonical vertex index (torus wrap; sphere charts
  // wrap in i and clamp rows to the pole vertices in j).
  int grid_index(int i, int j) const;
};

// Builds the mesh at resolution res = (N1, N2): a regular grid over the
// lattice fundamental domain, each cell split along the same diagonal.
// Sphere charts place ring vertices at interior latitudes and close the two
// boundaries with fans to near-pole vertices (never exactly at the chart
// singularity). The geometry frame must be ProductM only for product-ambient
// surfaces. Throws std::domain_error on non-immersive points and
// MeshQualityError on degenerate triangles.
PeriodicMesh triangulate(SurfacePtr surface, std::array<int, 2> res,
                         Frame frame = Frame::AmbientSphere);

// ASCII OFF export (nOFF for ambient dimension != 3): vertex positions in
// ambient coordinates followed by triangle index triples.
void export_off(const PeriodicMesh& mesh, const std::string& path);

}  // namespace sg
