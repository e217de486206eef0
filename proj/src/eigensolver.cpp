#include "sg/eigensolver.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "sg/errors.hpp"

namespace sg {

namespace {

constexpr int kDenseThreshold = 512;

void validate_inputs(const Eigen::SparseMatrix<double>& a, const Vec& m, int k) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw std::invalid_argument("eigensolver: A must be square");
  if (m.size() != n) throw std::invalid_argument("eigensolver: M size mismatch");
  if (m.minCoeff() <= 0.0)
    throw std::invalid_argument("eigensolver: mass matrix must be positive definite");
  if (k < 1 || 2 * k > n)
    throw std::invalid_argument("eigensolver: k must lie in [1, V/2]");

  Eigen::SparseMatrix<double> at = a.transpose();
  double scale = 0.0, asym = 0.0;
  for (int c = 0; c < a.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, c); it; ++it)
      scale = std::max(scale, std::abs(it.value()));
  Eigen::SparseMatrix<double> diff = a - at;
  for (int c = 0; c < diff.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, c); it; ++it)
      asym = std::max(asym, std::abs(it.value()));
  if (asym > 1e-10 * std::max(1.0, scale))
    throw std::invalid_argument("eigensolver: A must be symmetric");
}

// Congruence to a standard problem: B = D A D with D = diag(1/sqrt(M)) has
// the same eigenvalues as (A, M); eigenvectors map back by u = D v.
Eigen::SparseMatrix<double> scale_to_standard(const Eigen::SparseMatrix<double>& a,
                                              const Vec& dinv_sqrt) {
  Eigen::SparseMatrix<double> b = a;
  for (int c = 0; c < b.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(b, c); it; ++it)
      it.valueRef() *= dinv_sqrt[it.row()] * dinv_sqrt[it.col()];
  Eigen::SparseMatrix<double> bt = b.transpose();
  return 0.5 * (b + bt);
}

double gershgorin_lower(const Eigen::SparseMatrix<double>& b) {
  const int n = static_cast<int>(b.rows());
  Vec diag = Vec::Zero(n), offsum = Vec::Zero(n);
  for (int c = 0; c < b.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(b, c); it; ++it) {
      if (it.row() == it.col())
        diag[it.row()] += it.value();
      else
        offsum[it.row()] += std::abs(it.value());
    }
  return (diag - offsum).minCoeff();
}

struct OriginalProblem {
  const Eigen::SparseMatrix<double>* a;
  const Vec* m;
  Vec d;  // 1/sqrt(M)

  // Residual of the pair (lambda, v) mapped back to the original pencil.
  double residual(double lambda, const Vec& v) const {
    Vec u = d.cwiseProduct(v);
    Vec mu = m->cwiseProduct(u);
    return ((*a) * u - lambda * mu).norm() / mu.norm();
  }
  double rayleigh(const Vec& v) const {
    Vec u = d.cwiseProduct(v);
    return u.dot((*a) * u) / u.dot(m->cwiseProduct(u));
  }
};

EigenResult finalize(const OriginalProblem& prob, std::vector<std::pair<double, Vec>>& pairs,
                     int k, int iterations) {
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  const int n = static_cast<int>(prob.d.size());
  EigenResult res;
  res.eigenvalues.resize(k);
  res.eigenvectors.resize(n, k);
  res.residuals.resize(k);
  res.iterations = iterations;
  for (int i = 0; i < k; ++i) {
    Vec v = pairs[i].second;
    // Safety re-orthonormalization against the previously emitted columns
    // (in the standard space, where M-orthonormality is plain orthonormality).
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < i; ++j) {
        Vec prev = res.eigenvectors.col(j).cwiseQuotient(prob.d);
        v -= prev.dot(v) * prev;
      }
    v.normalize();
    Vec u = prob.d.cwiseProduct(v);
    Eigen::Index imax = 0;
    u.cwiseAbs().maxCoeff(&imax);
    if (u[imax] < 0.0) u = -u;  // deterministic sign convention
    res.eigenvalues[i] = prob.rayleigh(v);
    res.eigenvectors.col(i) = u;
  }
  // The Rayleigh refinement can reorder members of a numerically degenerate
  // cluster at roundoff scale; restore the nondecreasing contract explicitly.
  std::vector<int> order(k);
  for (int i = 0; i < k; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return res.eigenvalues[a] < res.eigenvalues[b]; });
  EigenResult sorted = res;
  for (int i = 0; i < k; ++i) {
    sorted.eigenvalues[i] = res.eigenvalues[order[i]];
    sorted.eigenvectors.col(i) = res.eigenvectors.col(order[i]);
  }
  for (int i = 0; i < k; ++i) {
    Vec u = sorted.eigenvectors.col(i);
    Vec mu = prob.m->cwiseProduct(u);
    sorted.residuals[i] = ((*prob.a) * u - sorted.eigenvalues[i] * mu).norm() / mu.norm();
  }
  return sorted;
}

}  // namespace

EigenResult smallest_eigenpairs(const Eigen::SparseMatrix<double>& A, const Vec& M, int k,
                                double tol, std::uint64_t seed) {
  validate_inputs(A, M, k);
  const int n = static_cast<int>(A.rows());

  OriginalProblem prob{&A, &M, M.cwiseSqrt().cwiseInverse()};
  Eigen::SparseMatrix<double> B = scale_to_standard(A, prob.d);

  if (n <= kDenseThreshold) {
    const Eigen::MatrixXd dense(B);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    if (es.info() != Eigen::Success)
      throw NonConvergenceError("eigensolver: dense decomposition failed", 1.0);
    std::vector<std::pair<double, Vec>> pairs;
    for (int i = 0; i < k; ++i) pairs.emplace_back(es.eigenvalues()[i], es.eigenvectors().col(i));
    return finalize(prob, pairs, k, 0);
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_vec = [&]() {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    return v;
  };

  Eigen::SparseMatrix<double> identity(n, n);
  identity.setIdentity();

  // Shift placement. Start from the Gershgorin certificate, optionally
  // tighten with a crude Ritz estimate, and verify each candidate by the
  // factorization's pivot signs (no eigenvalue may lie below the shift).
  const double lb = gershgorin_lower(B);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol;
  auto try_factor = [&](double sigma) {
    Eigen::SparseMatrix<double> shifted = B - sigma * identity;
    chol.compute(shifted);
    if (chol.info() != Eigen::Success) return false;
    const auto& dvec = chol.vectorD();
    const double dmax = dvec.cwiseAbs().maxCoeff();
    for (int i = 0; i < dvec.size(); ++i)
      if (!(dvec[i] > 1e-14 * dmax)) return false;  // eigenvalue at/below shift
    return true;
  };

  double sigma = lb - 0.01 * std::max(1.0, std::abs(lb));
  if (!try_factor(sigma))
    throw NonConvergenceError("eigensolver: could not factor below the spectrum", 1.0);

  auto apply_inverse = [&](const Vec& x) { return Vec(chol.solve(x)); };

  // Crude pass to locate lambda_1, then re-center the shift right below it
  // for fast separation of the low end of the spectrum.
  {
    const int m_steps = std::min(40, n - 2);
    Vec v = random_vec();
    v.normalize();
    std::vector<Vec> basis;
    Vec alpha(m_steps), beta(m_steps);
    Vec v_prev = Vec::Zero(n);
    double b_prev = 0.0;
    int steps = 0;
    for (int j = 0; j < m_steps; ++j) {
      basis.push_back(v);
      Vec w = apply_inverse(v);
      w -= b_prev * v_prev;
      alpha[j] = v.dot(w);
      w -= alpha[j] * v;
      for (const Vec& q : basis) w -= q.dot(w) * q;
      const double b = w.norm();
      steps = j + 1;
      if (b < 1e-13) break;
      beta[j] = b;
      v_prev = v;
      b_prev = b;
      v = w / b;
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(steps, steps);
    for (int j = 0; j < steps; ++j) {
      t(j, j) = alpha[j];
      if (j + 1 < steps) t(j, j + 1) = t(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tes(t);
    const double theta_max = tes.eigenvalues().maxCoeff();
    if (theta_max > 0.0) {
      const double lambda_est = sigma + 1.0 / theta_max;  // >= lambda_1
      double gap = std::max(0.25, 0.05 * (std::abs(lambda_est) + 1.0));
      double cand = lambda_est - gap;
      bool placed = false;
      for (int attempt = 0; attempt < 6 && !placed; ++attempt) {
        if (try_factor(cand)) {
          sigma = cand;
          placed = true;
        } else {
          gap *= 2.0;
          cand = lambda_est - gap;
        }
      }
      if (!placed && !try_factor(sigma))
        throw NonConvergenceError("eigensolver: shift placement failed", 1.0);
    }
  }

  const int k_want = std::min(k + 4, n / 2);
  const int budget = 10 * k;
  const int m_steps = std::min(std::max(2 * k_want + 16, 48), n - 2);

  std::vector<std::pair<double, Vec>> accepted;  // (lambda, v in standard space)
  double best_residual = std::numeric_limits<double>::infinity();
  int total_steps = 0;
  Vec warm = Vec::Zero(0);  // unconverged Ritz vector carried across restarts
  double stall_residual = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < budget && static_cast<int>(accepted.size()) < k_want;
       ++restart) {
    Vec v = warm.size() > 0 ? warm : random_vec();
    warm.resize(0);
    for (const auto& p : accepted) v -= p.second.dot(v) * p.second;
    if (v.norm() < 1e-8) continue;
    v.normalize();

    std::vector<Vec> basis;
    Vec alpha(m_steps), beta(m_steps);
    Vec v_prev = Vec::Zero(n);
    double b_prev = 0.0;
    int steps = 0;
    for (int j = 0; j < m_steps; ++j) {
      basis.push_back(v);
      Vec w = apply_inverse(v);
      w -= b_prev * v_prev;
      alpha[j] = v.dot(w);
      w -= alpha[j] * v;
      // Full reorthogonalization against the Krylov basis and the deflated
      // (already accepted) invariant directions, twice for roundoff.
      for (int pass = 0; pass < 2; ++pass) {
        for (const Vec& q : basis) w -= q.dot(w) * q;
        for (const auto& p : accepted) w -= p.second.dot(w) * p.second;
      }
      const double b = w.norm();
      steps = j + 1;
      ++total_steps;
      if (b < 1e-13) break;  // invariant subspace exhausted
      beta[j] = b;
      v_prev = v;
      b_prev = b;
      v = w / b;
    }

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(steps, steps);
    for (int j = 0; j < steps; ++j) {
      t(j, j) = alpha[j];
      if (j + 1 < steps) t(j, j + 1) = t(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tes(t);

    std::vector<int> order(steps);
    for (int i = 0; i < steps; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return tes.eigenvalues()[x] > tes.eigenvalues()[y]; });

    // Accept converged Ritz pairs in spectral order; stop at the first miss
    // so the accepted set always forms a bottom slice of the spectrum.
    for (int idx : order) {
      if (static_cast<int>(accepted.size()) >= k_want) break;
      const double theta = tes.eigenvalues()[idx];
      if (!(theta > 0.0)) break;
      Vec x = Vec::Zero(n);
      for (int j = 0; j < steps; ++j) x += tes.eigenvectors()(j, idx) * basis[j];
      for (const auto& p : accepted) x -= p.second.dot(x) * p.second;
      const double nx = x.norm();
      if (nx < 1e-8) continue;
      x /= nx;
      const double lambda = prob.rayleigh(x);
      const double r = prob.residual(lambda, x);
      best_residual = std::min(best_residual, r);
      if (r <= tol * std::max(1.0, std::abs(lambda))) {
        accepted.emplace_back(lambda, x);
        stall_residual = std::numeric_limits<double>::infinity();
      } else if (r < 0.9 * stall_residual) {
        // Resume from the stalled candidate instead of gambling on a fresh
        // random start: restarted Lanczos then makes monotone progress.
        warm = x;
        stall_residual = r;
        break;
      } else {
        // The warm start reproduced itself; fall back to a random direction
        // rather than repeating the identical sweep until the budget burns.
        stall_residual = std::numeric_limits<double>::infinity();
        break;
      }
    }
  }

  if (static_cast<int>(accepted.size()) < k)
    throw NonConvergenceError("eigensolver: restart budget exhausted before k pairs converged",
                              best_residual);
  return finalize(prob, accepted, k, total_steps);
}

Vec first_eigenfunction(const Eigen::SparseMatrix<double>& A, const Vec& M, double tol,
                        std::uint64_t seed) {
  EigenResult res = smallest_eigenpairs(A, M, 1, tol, seed);
  Vec phi = res.eigenvectors.col(0);
  const double sup = phi.cwiseAbs().maxCoeff();
  if (phi.minCoeff() < -1e-6 * sup)
    throw std::runtime_error(
        "first_eigenfunction: ground state changes sign (discretization fault)");
  // Clamp roundoff-negative entries so downstream weights stay positive.
  for (int i = 0; i < phi.size(); ++i) phi[i] = std::max(phi[i], 0.0);
  return phi;
}

}  // namespace sg
