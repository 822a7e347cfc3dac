#ifndef STEKLOVCC_EIGSOLVE_HPP
#define STEKLOVCC_EIGSOLVE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "steklovcc/errors.hpp"

namespace steklov::detail {

struct PencilEigs {
  Eigen::VectorXd values;  // ascending
  Eigen::MatrixXd vectors; // M-orthonormal columns
};

/// Dense symmetric-definite pencil A x = lambda M x (M SPD), all eigenpairs
/// ascending, vectors M-orthonormal.
inline PencilEigs dense_pencil_eigs(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, M);
  if (es.info() != Eigen::Success)
    throw NumericalError("dense_eigensolver", "generalized eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Shift-invert Lanczos (full reorthogonalization, M inner product) for the
/// k smallest eigenvalues of A x = lambda M x. Requires sigma strictly below
/// the spectrum so that A - sigma*M is positive definite. The start vector is
/// drawn from a fixed seed; results are run-to-run deterministic.
inline PencilEigs lanczos_smallest(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& solve_shifted,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply_m, int n, int k,
    double sigma, double tol = 1e-11) {
  if (k < 1 || k > n)
    throw PreconditionError("bad_eig_count", "requested eigenpair count out of range");
  const int maxdim = std::min(n, std::max(3 * k + 24, 60));

  std::mt19937 rng(20240617u);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto fresh_vector = [&]() {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = unif(rng);
    return v;
  };

  Eigen::MatrixXd V(n, maxdim + 1);
  Eigen::MatrixXd MV(n, maxdim + 1); // cache of M * v_j
  std::vector<double> alpha, beta;

  {
    Eigen::VectorXd r = fresh_vector();
    Eigen::VectorXd mr = apply_m(r);
    const double b0 = std::sqrt(r.dot(mr));
    V.col(0) = r / b0;
    MV.col(0) = mr / b0;
  }

  int m = 0;
  bool exhausted = false; // no further Krylov directions available
  double last_beta = 0.0;
  double worst_residual = 0.0;

  auto ritz = [&](bool& converged_out) {
    Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      Tm(i, i) = alpha[i];
      if (i + 1 < m) Tm(i, i + 1) = Tm(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tes(Tm);
    const Eigen::VectorXd theta = tes.eigenvalues(); // ascending
    const double theta_max = std::abs(theta[m - 1]);
    bool converged = true;
    worst_residual = 0.0;
    for (int i = 0; i < k; ++i) {
      const int idx = m - 1 - i; // largest theta = smallest pencil eigenvalue
      const double resid = std::abs(last_beta * tes.eigenvectors()(m - 1, idx));
      worst_residual = std::max(worst_residual, resid);
      if (resid > tol * std::max(std::abs(theta[idx]), 1e-3 * theta_max))
        converged = false;
    }
    converged_out = converged || exhausted || m >= n;
    PencilEigs out;
    out.values.resize(k);
    out.vectors.resize(n, k);
    for (int i = 0; i < k; ++i) {
      const int idx = m - 1 - i;
      if (theta[idx] <= 0.0)
        throw NumericalError("eigensolver_breakdown",
                             "nonpositive shift-invert Ritz value; bad sigma?");
      out.values[i] = sigma + 1.0 / theta[idx];
      out.vectors.col(i) = V.leftCols(m) * tes.eigenvectors().col(idx);
    }
    return out;
  };

  for (int j = 0; j < maxdim && !exhausted; ++j) {
    Eigen::VectorXd w = solve_shifted(MV.col(j));
    const double a = w.dot(MV.col(j));
    alpha.push_back(a);
    w -= a * V.col(j);
    if (j > 0) w -= beta[j - 1] * V.col(j - 1);
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd h = MV.leftCols(j + 1).transpose() * w;
      w -= V.leftCols(j + 1) * h;
    }
    Eigen::VectorXd mw = apply_m(w);
    double b = std::sqrt(std::max(w.dot(mw), 0.0));
    beta.push_back(b);
    last_beta = b;
    m = j + 1;

    if (b < 1e-13 * (std::abs(alpha[0]) + 1.0)) {
      // invariant subspace: restart with a fresh orthogonalized direction
      beta.back() = 0.0;
      last_beta = 0.0;
      bool replaced = false;
      if (m < n) {
        w = fresh_vector();
        for (int pass = 0; pass < 2; ++pass) {
          const Eigen::VectorXd h = MV.leftCols(m).transpose() * w;
          w -= V.leftCols(m) * h;
        }
        mw = apply_m(w);
        const double nb = std::sqrt(std::max(w.dot(mw), 0.0));
        if (nb > 1e-14) {
          V.col(m) = w / nb;
          MV.col(m) = mw / nb;
          replaced = true;
        }
      }
      if (!replaced) exhausted = true;
    } else {
      V.col(m) = w / b;
      MV.col(m) = mw / b;
    }

    if (m >= k) {
      bool converged = false;
      PencilEigs out = ritz(converged);
      if (converged) return out;
    }
  }

  if (m >= k && (exhausted || m >= n)) {
    // complete (or invariant) Krylov space: Ritz pairs are exact
    bool converged = false;
    return ritz(converged);
  }
  throw NumericalError("eigensolver_nonconvergence",
                       "shift-invert Lanczos did not converge; last residual " +
                           std::to_string(worst_residual));
}

/// Sparse pencil wrapper: factors A - sigma*M once and runs lanczos_smallest.
inline PencilEigs lanczos_smallest_sparse(const Eigen::SparseMatrix<double>& A,
                                          const Eigen::SparseMatrix<double>& M, int k,
                                          double sigma, double tol = 1e-11) {
  const int n = static_cast<int>(A.rows());
  Eigen::SparseMatrix<double> shifted = A;
  if (sigma != 0.0) shifted = A - sigma * M;
  auto llt = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(shifted);
  if (llt->info() != Eigen::Success)
    throw NumericalError("shift_factorization", "factorization of shifted pencil failed");
  auto solve = [llt](const Eigen::VectorXd& x) { return Eigen::VectorXd(llt->solve(x)); };
  auto applym = [&M](const Eigen::VectorXd& x) { return Eigen::VectorXd(M * x); };
  return lanczos_smallest(solve, applym, n, k, sigma, tol);
}

/// Finite eigenvalues of S x = mu M x with S SPD and M only PSD, via the
/// reversed pencil: eigenpairs of L^{-1} M L^{-T} with S = L L^T. Vectors are
/// normalized to x^T S x = 1; values ascend.
inline PencilEigs finite_pencil_eigs_reversed(const Eigen::MatrixXd& S,
                                              const Eigen::MatrixXd& M,
                                              double zeta_rel_tol = 1e-10) {
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success)
    throw NumericalError("pencil_not_spd", "left pencil matrix is not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd C = L.triangularView<Eigen::Lower>().solve(M);
  C = L.triangularView<Eigen::Lower>().solve(C.transpose()).eval();
  C = (0.5 * (C + C.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  if (es.info() != Eigen::Success)
    throw NumericalError("dense_eigensolver", "reversed pencil eigendecomposition failed");
  const Eigen::VectorXd zeta = es.eigenvalues(); // ascending
  const double zmax = zeta.size() ? std::max(zeta[zeta.size() - 1], 0.0) : 0.0;
  std::vector<int> keep;
  for (int i = 0; i < zeta.size(); ++i)
    if (zeta[i] > zeta_rel_tol * zmax && zeta[i] > 0.0) keep.push_back(i);

  PencilEigs out;
  out.values.resize(static_cast<int>(keep.size()));
  out.vectors.resize(S.rows(), static_cast<int>(keep.size()));
  // largest zeta = smallest mu; emit mu ascending
  for (size_t i = 0; i < keep.size(); ++i) {
    const int idx = keep[keep.size() - 1 - i];
    out.values[static_cast<int>(i)] = 1.0 / zeta[idx];
    out.vectors.col(static_cast<int>(i)) =
        llt.matrixU().solve(es.eigenvectors().col(idx));
  }
  return out;
}

} // namespace steklov::detail

#endif
