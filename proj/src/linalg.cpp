#include "freeclark/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace freeclark {

Mat PsdFactor::coords() const {
  return lambda.cwiseSqrt().asDiagonal() * V.adjoint();
}

Mat PsdFactor::coords_pinv() const {
  return V * lambda.cwiseSqrt().cwiseInverse().asDiagonal();
}

Mat PsdFactor::pinv() const {
  return V * lambda.cwiseInverse().asDiagonal() * V.adjoint();
}

PsdFactor psd_factor(const Mat& G, double rel_tol) {
  PsdFactor f;
  const Eigen::Index n = G.rows();
  if (G.cols() != n) throw DimensionError("psd_factor: matrix is not square");
  if (n == 0) {
    f.V = Mat(0, 0);
    f.lambda = Eigen::VectorXd(0);
    return f;
  }
  Mat H = 0.5 * (G + G.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  f.min_eig = ev(0);
  f.lambda_max = std::max(ev(n - 1), 0.0);
  const double cut = rel_tol * f.lambda_max;
  int r = 0;
  for (Eigen::Index k = n - 1; k >= 0 && ev(k) > cut && ev(k) > 0.0; --k) ++r;
  f.rank = r;
  f.lambda.resize(r);
  f.V.resize(n, r);
  for (int k = 0; k < r; ++k) {
    f.lambda(k) = ev(n - 1 - k);
    f.V.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  return f;
}

// BDCSVD in Eigen 3.4 loses accuracy (1e-6 relative) on some complex inputs,
// so norms go through the Hermitian eigensolver and pseudoinverses through JacobiSVD.
double op_norm(const Mat& A) {
  if (A.size() == 0) return 0.0;
  const Mat G = A.rows() >= A.cols() ? Mat(A.adjoint() * A) : Mat(A * A.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(G, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double max_abs(const Mat& A) {
  if (A.size() == 0) return 0.0;
  return A.cwiseAbs().maxCoeff();
}

Mat pinv(const Mat& A, double rel_tol) {
  if (A.size() == 0) return Mat::Zero(A.cols(), A.rows());
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cut = rel_tol * s(0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > cut && s(k) > 0.0) inv(k) = 1.0 / s(k);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Mat orth(const Mat& A, double rel_tol) {
  if (A.size() == 0) return Mat(A.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cut = rel_tol * s(0);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut && s(r) > 0.0) ++r;
  return svd.matrixU().leftCols(r);
}

bool is_hermitian(const Mat& A, double tol) {
  if (A.rows() != A.cols()) return false;
  const double scale = std::max(1.0, max_abs(A));
  return max_abs(A - A.adjoint()) <= tol * scale;
}

Mat kron(const Mat& A, const Mat& B) {
  Mat K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

}  // namespace freeclark
