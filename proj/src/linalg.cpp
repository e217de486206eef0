#include "sg/linalg.hpp"

#include <stdexcept>

namespace sg {

Vec hodge_complement(const std::vector<Vec>& vs) {
  if (vs.empty()) throw std::invalid_argument("hodge_complement: no input vectors");
  const int d = static_cast<int>(vs[0].size());
  if (static_cast<int>(vs.size()) != d - 1)
    throw std::invalid_argument("hodge_complement: need d-1 vectors in R^d");

  Eigen::MatrixXd a(d, d - 1);
  for (int j = 0; j < d - 1; ++j) {
    if (vs[j].size() != d)
      throw std::invalid_argument("hodge_complement: inconsistent dimensions");
    a.col(j) = vs[j];
  }

  // <c,w> = det[v_1 .. v_{d-1} w]; expand along the last column.
  Vec c(d);
  Eigen::MatrixXd sub(d - 1, d - 1);
  for (int i = 0; i < d; ++i) {
    int r = 0;
    for (int row = 0; row < d; ++row) {
      if (row == i) continue;
      sub.row(r++) = a.row(row);
    }
    const double sign = ((i + d - 1) % 2 == 0) ? 1.0 : -1.0;
    c[i] = sign * sub.determinant();
  }
  return c;
}

int wedge_pair_index(int i, int j) {
  static constexpr int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  return table[i][j];
}

Eigen::Matrix<double, 6, 1> wedge2(const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
  Eigen::Matrix<double, 6, 1> w;
  int k = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) w[k++] = a[i] * b[j] - a[j] * b[i];
  return w;
}

Vec project_out(const Vec& v, const std::vector<Vec>& orthonormal_basis) {
  Vec out = v;
  for (const Vec& b : orthonormal_basis) out -= b.dot(out) * b;
  // A second pass tightens orthogonality to roundoff.
  for (const Vec& b : orthonormal_basis) out -= b.dot(out) * b;
  return out;
}

}  // namespace sg
