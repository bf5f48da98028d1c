#pragma once

#include <string>

#include "freeclark/herglotz.hpp"

namespace freeclark {

/// Hermitian family K_{a,b} of m x m blocks over word pairs, stored as its
/// dense block Gram matrix (row block a, column block b).
struct CoeffKernel {
  int d = 1, m = 1, N = 0;
  std::shared_ptr<const WordTable> words;
  Mat G;
  /// Non-empty when the input was not certified contractive.
  std::string warning;

  CoeffKernel() : CoeffKernel(1, 1, 0) {}
  CoeffKernel(int d, int m, int N);

  Mat entry(int a, int b) const { return G.block(a * m, b * m, m, m); }
  Mat entry(const Word& a, const Word& b) const;
  void set(int a, int b, const Mat& v) { G.block(a * m, b * m, m, m) = v; }
};

struct PsdReport {
  double min_eig = 0.0;
  double norm = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

CoeffKernel szego_kernel(int d, int m, int N);

/// Right: delta_{ab} I - sum_{a=g u, b=g v} B_u B_v*.  Left: same with a=u g, b=v g.
CoeffKernel dbr_kernel(const FreeSeries& B, Side side);

/// Left: phi((L^{a^T})* L^{b^T}).  Right: phi((L^a)* L^b).
CoeffKernel herglotz_kernel_from_moments(const MomentFunctional& phi, Side side);

/// Left: (sum_{g b = a} H_g + sum_{g a = b} H_g*)/2.  Right: suffix conditions a = b g, b = a g.
CoeffKernel herglotz_kernel_from_H(const FreeSeries& H, Side side);

/// Double convolution M(Z) K(Z,W) M(W)* with side-appropriate products.
CoeffKernel kernel_conjugate(const CoeffKernel& K, const FreeSeries& M, Side side);

inline const Mat& gram(const CoeffKernel& K) { return K.G; }

/// min_eig >= -tol * max(1, norm); throws if G is not Hermitian to 1e-12.
PsdReport psd_check(const Mat& G, double tol = 1e-9);

}  // namespace freeclark
