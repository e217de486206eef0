#pragma once

#include <stdexcept>
#include <string>

namespace sg {

// An iterative solve ran out of budget. Carries the best residual reached so
// the caller can decide whether the partial result is still useful.
class NonConvergenceError : public std::runtime_error {
public:
  NonConvergenceError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

private:
  double best_residual_;
};

// The mesh is too coarse or distorted for a quadrature-based topological
// quantity to be trusted (e.g. curvature integral far from 2*pi*integer).
class MeshQualityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace sg
