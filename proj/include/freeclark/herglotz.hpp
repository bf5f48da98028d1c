#pragma once

#include <utility>

#include "freeclark/series.hpp"

namespace freeclark {

/// Moment data of a completely positive map on the free disk operator system:
/// phi(I) and phi(L^g) for 1 <= |g| <= N.  moments[0] mirrors phi_I.
struct MomentFunctional {
  int d = 1, m = 1, N = 0;
  std::shared_ptr<const WordTable> words;
  Mat phi_I;
  std::vector<Mat> moments;  // by word index

  MomentFunctional() : MomentFunctional(1, 1, 0) {}
  MomentFunctional(int d, int m, int N);

  /// phi(L^w) (phi(I) for the empty word).
  const Mat& moment(const Word& w) const;
  const Mat& operator[](int i) const { return moments[i]; }
  void set(int i, const Mat& v);
  MomentFunctional truncated(int N2) const;
};

/// Evaluates phi on the reduced monomial of (L^a)* L^b.
Mat resolve(const Cancellation& c, const MomentFunctional& phi);

/// H = (I - B)^{-1} (I + B), left product.
FreeSeries cayley_to_herglotz(const FreeSeries& B);

/// B = (H + I)^{-1} (H - I), left product.
FreeSeries cayley_to_schur(const FreeSeries& H);

/// phi(I) = (H_0 + H_0*)/2, phi(L^g) = H_{g^T}* / 2.
MomentFunctional moments_from_herglotz(const FreeSeries& H);

/// Left: H_0 = phi(I) + imag_part, H_a = 2 phi(L^{a^T})*.  Right: transpose of the left series.
/// imag_part defaults to zero (canonical choice of the imaginary constant).
FreeSeries herglotz_from_moments(const MomentFunctional& phi, Side side, const Mat& imag_part = Mat());

MomentFunctional moments_from_schur(const FreeSeries& B);

/// (B^L, B^R) with B^R the transpose of B^L.
std::pair<FreeSeries, FreeSeries> schur_pair_from_moments(const MomentFunctional& phi);

/// Non-unital margin: ||B_0|| < 1 - kNonUnitalMargin is required.
inline constexpr double kNonUnitalMargin = 1e-8;

/// Throws NonUnitalError unless ||B_0|| < 1 - 1e-8.
void require_non_unital(const FreeSeries& B);

}  // namespace freeclark
