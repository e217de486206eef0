#include "sg/operators.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "sg/errors.hpp"

namespace sg {

Eigen::SparseMatrix<double> DiscreteOperator::matrix() const {
  Eigen::SparseMatrix<double> a = stiffness;
  Eigen::SparseMatrix<double> q(a.rows(), a.cols());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(potential.size());
  for (int i = 0; i < potential.size(); ++i) trips.emplace_back(i, i, potential[i]);
  q.setFromTriplets(trips.begin(), trips.end());
  return a - q;
}

Eigen::SparseMatrix<double> assemble_stiffness(const PeriodicMesh& mesh) {
  const int n = mesh.num_vertices();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(mesh.num_triangles()) * 12);

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& l = mesh.tri_edge_len[t];
    const double semi = 0.5 * (l[0] + l[1] + l[2]);
    const double arg = semi * (semi - l[0]) * (semi - l[1]) * (semi - l[2]);
    if (!(arg > 0.0)) {
      std::ostringstream msg;
      msg << "assemble_stiffness: degenerate triangle " << t;
      throw MeshQualityError(msg.str());
    }
    const double area = std::sqrt(arg);
    for (int c = 0; c < 3; ++c) {
      const int i = mesh.triangles[t][(c + 1) % 3];
      const int j = mesh.triangles[t][(c + 2) % 3];
      const double opp = l[c], e1 = l[(c + 1) % 3], e2 = l[(c + 2) % 3];
      // Half-cotangent of the corner angle opposite edge (i,j).
      const double w = (e1 * e1 + e2 * e2 - opp * opp) / (8.0 * area);
      trips.emplace_back(i, i, w);
      trips.emplace_back(j, j, w);
      trips.emplace_back(i, j, -w);
      trips.emplace_back(j, i, -w);
    }
  }
  Eigen::SparseMatrix<double> s(n, n);
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

Vec assemble_mass(const PeriodicMesh& mesh) {
  Vec m = Vec::Zero(mesh.num_vertices());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double share = mesh.tri_area[t] / 3.0;
    for (int c = 0; c < 3; ++c) m[mesh.triangles[t][c]] += share;
  }
  return m;
}

DiscreteOperator assemble_operator(const PeriodicMesh& mesh, OperatorKind kind) {
  if (kind == OperatorKind::JacobiProduct && mesh.frame != Frame::ProductM)
    throw std::invalid_argument(
        "assemble_operator: the product-ambient stability operator needs a product-frame mesh");
  if (kind == OperatorKind::JacobiSphere && mesh.frame != Frame::AmbientSphere)
    throw std::invalid_argument(
        "assemble_operator: the sphere stability operator needs a sphere-frame mesh");

  DiscreteOperator op;
  op.kind = kind;
  op.stiffness = assemble_stiffness(mesh);
  op.mass = assemble_mass(mesh);
  op.potential = Vec::Zero(mesh.num_vertices());
  if (kind != OperatorKind::Laplace) {
    for (int i = 0; i < mesh.num_vertices(); ++i)
      op.potential[i] = mesh.vertex_geometry[i].potential * op.mass[i];
  }
  return op;
}

double dirichlet_energy(const Eigen::SparseMatrix<double>& stiffness,
                        const Eigen::MatrixXd& values) {
  if (values.rows() != stiffness.rows())
    throw std::invalid_argument("dirichlet_energy: one row per vertex required");
  double total = 0.0;
  for (int c = 0; c < values.cols(); ++c) {
    const Eigen::VectorXd col = values.col(c);
    total += col.dot(stiffness * col);
  }
  return total;
}

double dirichlet_energy(const PeriodicMesh& mesh, const Eigen::MatrixXd& values) {
  return dirichlet_energy(assemble_stiffness(mesh), values);
}

}  // namespace sg
