#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "sg/eigensolver.hpp"
#include "sg/mesh.hpp"

namespace sg {

// Closed-form spectral data of the flat tori
// (r cos u, r sin u, t cos v, t sin v, h) in S^1(r) x S^2(s), s^2 = t^2+h^2.
struct Section5Oracle {
  double r = 0, t = 0, h = 0, s = 0;

  double kappa1() const { return 0.0; }
  double kappa2() const { return h / (s * t); }
  double potential() const { return 1.0 / (t * t); }
  double laplace_eigenvalue(int m, int n) const {
    return m * m / (r * r) + n * n / (t * t);
  }
  std::vector<double> smallest_laplace(int k) const;  // sorted, with multiplicity
  double lambda2_jacobi() const {
    return std::min(1.0 / (r * r), 1.0 / (t * t)) - 1.0 / (t * t);
  }
};

// Validates r,t > 0 and r^2 + t^2 + h^2 = 1.
Section5Oracle section5_oracle(double r, double t, double h);
double section5_lambda2(double r, double t, double h);

// One verified claim with the numbers behind the verdict. The checked
// statement is always normalized to "lhs <= rhs (+ error_estimate)".
struct TheoremReport {
  std::string surface;
  std::map<std::string, double> params;
  std::array<int, 2> resolution{0, 0};
  std::string op;              // operator the eigenvalues refer to
  std::vector<double> lambda;  // low eigenvalues, nondecreasing
  double lhs = 0, rhs = 0;
  double margin = 0;           // rhs + error_estimate - lhs
  double error_estimate = 0;   // combined quadrature + solver estimate
  std::string verdict;         // "pass" | "fail"
  std::uint64_t seed = 0;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
};

// Compares the discretized spectra of the section5 torus against the closed
// forms: Laplace eigenvalues and the stability-operator lambda_2.
TheoremReport verify_section5(double r, double t, double h, std::array<int, 2> res,
                              double tol = 1e-9, std::uint64_t seed = kDefaultSeed);

// Checks lambda_2(L) |Sigma| <= -2 W(Sigma) + 4 pi chi(Sigma) for a
// sphere-ambient torus, with equality asserted for the clifford and
// equilateral tori (lambda_2 = -2).
TheoremReport verify_theorem1(SurfacePtr surface, std::array<int, 2> res, double tol = 1e-9,
                              std::uint64_t seed = kDefaultSeed);

// Checks lambda_2 <= 0 for the section5 family; when r < s the hypothesis
// of the statement fails and the report flags the witness instead.
TheoremReport verify_theorem2(double r, double t, double h, std::array<int, 2> res,
                              double tol = 1e-9, std::uint64_t seed = kDefaultSeed);

// Euler characteristic from curvature quadrature, round(int K dv / 2 pi);
// throws MeshQualityError when the quadrature is farther than 0.1 from an
// integer.
int gauss_bonnet_chi(const PeriodicMesh& mesh);

// Samples random orthonormal tangent planes of S^1(r) x S^2(s) and compares
// the restricted curvature term |rho|^2_Sigma against its bound 2r^2/(1-r^2)
// (valid for r >= 1/sqrt 2). Canonical extremal planes are always included.
TheoremReport prop22_scan(double r, int samples, std::uint64_t seed = kDefaultSeed);

}  // namespace sg
