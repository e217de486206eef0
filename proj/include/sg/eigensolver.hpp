#pragma once

#include <Eigen/Sparse>
#include <cstdint>

#include "sg/linalg.hpp"

namespace sg {

inline constexpr std::uint64_t kDefaultSeed = 12345;

// Smallest eigenpairs of the symmetric generalized problem A u = lambda M u
// with diagonal positive M.
struct EigenResult {
  Vec eigenvalues;               // k values, nondecreasing, with multiplicity
  Eigen::MatrixXd eigenvectors;  // V x k, M-orthonormal columns
  Vec residuals;                 // per pair: ||A u - lambda M u|| / ||M u||
  int iterations = 0;            // Lanczos steps consumed (0 for dense path)
};

// Computes the k algebraically smallest eigenpairs. Small problems are solved
// densely; larger ones by shift-invert Lanczos with full reorthogonalization
// and deflation restarts, the shift placed strictly below the spectrum (pivot
// signs of the factorization certify the placement). A pair is accepted when
// its residual is at most tol * max(1, |lambda|): symmetry-degenerate
// clusters split at roundoff proportional to the matrix scale, so an absolute
// test would be unattainable for large eigenvalues. Throws
// std::invalid_argument on asymmetric A, non-positive M, or k outside
// [1, V/2]; throws NonConvergenceError when the restart budget (10 k) is
// exhausted, carrying the best residual reached.
EigenResult smallest_eigenpairs(const Eigen::SparseMatrix<double>& A, const Vec& M, int k,
                                double tol = 1e-9, std::uint64_t seed = kDefaultSeed);

// Ground state, signed so that its largest-magnitude entry is positive, and
// verified to be single-signed; a sign change beyond 1e-6 (relative to the
// sup norm) throws std::runtime_error, signalling a discretization fault.
Vec first_eigenfunction(const Eigen::SparseMatrix<double>& A, const Vec& M, double tol = 1e-9,
                        std::uint64_t seed = kDefaultSeed);

}  // namespace sg
