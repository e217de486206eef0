#pragma once

#include <Eigen/Sparse>

#include "sg/mesh.hpp"

namespace sg {

enum class OperatorKind {
  Laplace,        // -Delta
  JacobiSphere,   // -Delta - (|sigma|^2 + 2), stability operator in S^n
  JacobiProduct,  // -Delta - (|sigma|^2 + Ric_M(N,N)), stability operator in M
};

// Sparse discretization of -Delta - q as the generalized pencil
// (S - Q) u = lambda M u with lumped diagonal mass.
struct DiscreteOperator {
  OperatorKind kind = OperatorKind::Laplace;
  Eigen::SparseMatrix<double> stiffness;  // S, symmetric PSD, S*1 = 0
  Vec mass;                               // M diagonal, positive, sums to area
  Vec potential;                          // Q diagonal, entries q(v_i) * M_ii

  Eigen::SparseMatrix<double> matrix() const;  // A = S - diag(potential)
};

// Cotangent-weight stiffness matrix from the intrinsic (metric) edge lengths.
// Negative weights at obtuse corners are kept, preserving the Dirichlet form.
Eigen::SparseMatrix<double> assemble_stiffness(const PeriodicMesh& mesh);

// Lumped barycentric mass: one third of incident triangle areas per vertex.
Vec assemble_mass(const PeriodicMesh& mesh);

// Assembles (S, M, Q) for the requested operator. JacobiSphere requires a
// sphere-frame mesh; JacobiProduct requires a product-frame mesh.
DiscreteOperator assemble_operator(const PeriodicMesh& mesh, OperatorKind kind);

// Sum over columns of u^T S u: the discrete Dirichlet energy of a (possibly
// vector-valued) vertex map.
double dirichlet_energy(const Eigen::SparseMatrix<double>& stiffness,
                        const Eigen::MatrixXd& values);
double dirichlet_energy(const PeriodicMesh& mesh, const Eigen::MatrixXd& values);

}  // namespace sg
