#pragma once

#include <Eigen/Dense>
#include <vector>

namespace sg {

using Vec = Eigen::VectorXd;

// Generalized cross product: given d-1 vectors v_1..v_{d-1} in R^d, returns
// the unique c with <c,w> = det[v_1 ... v_{d-1} w] for all w. Orthogonal to
// every input; |c| equals the (d-1)-volume of their parallelepiped.
Vec hodge_complement(const std::vector<Vec>& vs);

// Column index of the (i,j) coordinate pair in the Lambda^2(R^4) basis,
// ordered (0,1),(0,2),(0,3),(1,2),(1,3),(2,3).
int wedge_pair_index(int i, int j);

// a ^ b for a,b in R^4, coordinates in the fixed pair order above.
Eigen::Matrix<double, 6, 1> wedge2(const Eigen::Vector4d& a, const Eigen::Vector4d& b);

// Removes from v its components along an orthonormal set {basis}.
Vec project_out(const Vec& v, const std::vector<Vec>& orthonormal_basis);

}  // namespace sg
