#pragma once

#include <memory>
#include <vector>

#include "freeclark/freecore.hpp"

namespace freeclark {

/// Truncated free power series sum_a Z^a F_a with m x m coefficients.
struct FreeSeries {
  int d = 1, m = 1, N = 0;
  std::shared_ptr<const WordTable> words;
  std::vector<Mat> coeffs;  // by word index

  FreeSeries() : FreeSeries(1, 1, 0) {}
  FreeSeries(int d, int m, int N);

  static FreeSeries constant(const Mat& c, int d, int N);
  static FreeSeries identity(int d, int m, int N) { return constant(Mat::Identity(m, m), d, N); }

  int size() const { return static_cast<int>(coeffs.size()); }
  const Mat& operator[](int i) const { return coeffs[i]; }
  Mat& operator[](int i) { return coeffs[i]; }
  /// Coefficient of w; zero when |w| > N.
  Mat coeff(const Word& w) const;
  /// Mutable coefficient of w; throws when |w| > N.
  Mat& at(const Word& w);
  /// Largest length carrying a coefficient above tol (-1 for the zero series).
  int degree(double tol = 0.0) const;
  /// Same series with truncation degree N2 (drops or zero-pads).
  FreeSeries truncated(int N2) const;
  /// sum_a ||F_a|| (spectral norms).
  double l1_norm() const;

  FreeSeries operator+(const FreeSeries& o) const;
  FreeSeries operator-(const FreeSeries& o) const;
  FreeSeries operator*(cplx s) const;
  /// Right-multiplies every coefficient by a constant matrix.
  FreeSeries times_constant(const Mat& U) const;
};

/// Truncated commutative power series sum_n z^n b_n.
struct CommSeries {
  int d = 1, m = 1, N = 0;
  std::shared_ptr<const MultiTable> multis;
  std::vector<Mat> coeffs;  // by multi index

  CommSeries() : CommSeries(1, 1, 0) {}
  CommSeries(int d, int m, int N);

  static CommSeries constant(const Mat& c, int d, int N);
  static CommSeries identity(int d, int m, int N) { return constant(Mat::Identity(m, m), d, N); }

  int size() const { return static_cast<int>(coeffs.size()); }
  const Mat& operator[](int i) const { return coeffs[i]; }
  Mat& operator[](int i) { return coeffs[i]; }
  Mat coeff(const MultiIndex& n) const;
  Mat& at(const MultiIndex& n);
  int degree(double tol = 0.0) const;
  CommSeries truncated(int N2) const;
  double l1_norm() const;

  CommSeries operator+(const CommSeries& o) const;
  CommSeries operator-(const CommSeries& o) const;
  CommSeries operator*(cplx s) const;
};

/// A d-tuple of n x n matrices.
struct NCPoint {
  int n = 0;
  std::vector<Mat> Z;
  /// Joint nilpotency order (all words of this length vanish), 0 if unknown.
  int nilpotent_order = 0;

  int d() const { return static_cast<int>(Z.size()); }
  /// ||(Z_1 ... Z_d)|| as a row operator.
  double row_norm() const;
};

/// Matrix of left or right multiplication by F on the truncated Fock space.
Mat mult_matrix(const FreeSeries& F, Side side, const TruncatedFock& fock);
inline Mat mult_matrix(const FreeSeries& F, Side side) { return mult_matrix(F, side, TruncatedFock(F.d, F.m, F.N)); }

/// Left: (FG)_c = sum_{ab=c} F_a G_b.  Right: (F *_R G)_c = sum_{ba=c} F_a G_b.
FreeSeries series_multiply(const FreeSeries& F, const FreeSeries& G, Side side);

/// Left inverse by degree recursion; throws NonUnitalError if F_0 is (nearly) singular.
FreeSeries invert_series(const FreeSeries& F);

FreeSeries transpose_series(const FreeSeries& F);

/// sum_a Z^a (x) F_a with Z^{i1..ik} = Z_{i1} ... Z_{ik}.
Mat eval_nc(const FreeSeries& F, const NCPoint& p);

CommSeries symmetrize_series(const FreeSeries& F);

struct NormBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// lower = norm of the compressed left multiplier, upper = l1 norm.
NormBounds schur_norm_bounds(const FreeSeries& F, const TruncatedFock& fock);

/// (fg)_n = sum_{p+q=n} f_p g_q.
CommSeries comm_multiply(const CommSeries& f, const CommSeries& g);
CommSeries comm_invert(const CommSeries& f);
/// f(z) = sum_n z^n f_n at a scalar point z in C^d.
Mat comm_eval(const CommSeries& f, const std::vector<cplx>& z);

/// Condition-number guard shared by the series inverses.
inline constexpr double kMaxCondition = 1e12;

}  // namespace freeclark
