#pragma once

#include "freeclark/types.hpp"

namespace freeclark {

/// Truncated eigendecomposition of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues are sorted in decreasing order; only those above
/// `rel_tol * lambda_max` are kept in `lambda` / `V`.
struct PsdFactor {
  Eigen::VectorXd lambda;
  Mat V;
  int rank = 0;
  double lambda_max = 0.0;
  double min_eig = 0.0;

  /// Coordinate map x -> Lambda^{1/2} V* x (rank x n).
  Mat coords() const;
  /// Right inverse of coords(): V Lambda^{-1/2} (n x rank).
  Mat coords_pinv() const;
  /// Moore-Penrose pseudoinverse of the factored matrix.
  Mat pinv() const;
};

PsdFactor psd_factor(const Mat& G, double rel_tol = 1e-10);

/// Largest singular value.
double op_norm(const Mat& A);

/// Largest absolute entry (0 for empty matrices).
double max_abs(const Mat& A);

/// Pseudoinverse with singular values below rel_tol * sigma_max dropped.
Mat pinv(const Mat& A, double rel_tol = 1e-10);

/// Orthonormal basis (columns) for the column span of A.
Mat orth(const Mat& A, double rel_tol = 1e-10);

/// True when ||A - A*|| is at most tol * max(1, ||A||).
bool is_hermitian(const Mat& A, double tol = 1e-12);

/// Kronecker product A (x) B.
Mat kron(const Mat& A, const Mat& B);

}  // namespace freeclark
