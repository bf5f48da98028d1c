#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "freeclark/clark.hpp"

namespace freeclark {

/// Moment data of a CP map on the symmetrized operator system: mu(I) and
/// mu(L^n) for 1 <= |n| <= N, where L^n is the sum of L^a over the fiber of n.
/// moments[0] mirrors mu_I.  imag_I carries Im H_b(0) so the Herglotz
/// function can be rebuilt exactly.
struct CommMomentFunctional {
  int d = 1, m = 1, N = 0;
  std::shared_ptr<const MultiTable> multis;
  Mat mu_I;
  Mat imag_I;
  std::vector<Mat> moments;  // by multi index

  CommMomentFunctional() : CommMomentFunctional(1, 1, 0) {}
  CommMomentFunctional(int d, int m, int N);

  const Mat& operator[](int i) const { return moments[i]; }
  const Mat& moment(const MultiIndex& n) const;
  void set(int i, const Mat& v);
};

/// H_b = (I - b)^{-1} (I + b).
CommSeries comm_cayley(const CommSeries& b);
/// b = (H + I)^{-1} (H - I).
CommSeries comm_cayley_inv(const CommSeries& H);

/// mu_I = Re H_b(0), moments[n] = (H_b)_n* / 2.
CommMomentFunctional comm_moments(const CommSeries& b);
/// H_0 = mu_I + imag_I, H_n = 2 mu_n*.
CommSeries comm_herglotz_from_moments(const CommMomentFunctional& mu);

/// |n|! / n! as a double.
inline double weight(const MultiTable& t, int i) { return static_cast<double>(t.multinomial_of(i)); }

/// Gram of the symmetric raw vectors: c_n mu(L^{k-n}) when k >= n, the
/// adjoint rule when n >= k, zero for incomparable indices.  Row block n, column block k.
Mat symmetric_gram(const CommMomentFunctional& mu);

/// Truncated H^2(mu_b): raw basis (n, i), ON coordinates from the Gram.
/// The raw vector (n,i) is the kernel coefficient K_n e_i; as a power series
/// its z^k coefficient block is gram(k, n).
struct CommHerglotzSpace {
  CommMomentFunctional mu;
  Mat gram;
  PsdFactor factor;
  Mat coords;  // rank x raw

  int rank() const { return factor.rank; }
  int raw_dim() const { return static_cast<int>(gram.rows()); }
  /// K_n in ON coordinates (rank x m).
  Mat K(int n) const { return coords.middleCols(n * mu.m, mu.m); }
};

CommHerglotzSpace build_herglotz_space(const CommMomentFunctional& mu, const GnsOptions& opts = {});

/// Largest squared distance from K_0 h (||h|| = 1) to span{K_n : 1 <= |n| <= N}.
double comm_quasi_extreme_indicator(const CommHerglotzSpace& space);

/// Row contraction D = (D_1 ... D_d) on the ON coordinates, stored as the
/// rank x (d * rank) row operator.
struct RowContractionExt {
  Mat row;
  bool tight = false;
  int d() const;
  Mat D(int j) const;  // j = 1..d
};

struct VbReport {
  RowContractionExt V;
  Mat initial;   // projection onto the initial space, in (C^d (x) H) coordinates
  Mat final_;    // projection onto the final space
  double partial_isometry_defect = 0.0;  // || V V*V - V ||
  double spectrum_defect = 0.0;          // distance of the spectrum of V*V from {0, 1}
  double constraint_residual = 0.0;
};

/// Minimal-norm solution of sum_j V_j K_{n - e_j} = K_n over 1 <= |n| <= N.
/// Throws DegenerateError when the constraints are inconsistent beyond 1e-8.
VbReport build_Vb(const CommHerglotzSpace& space);

/// D = V + C with C supported on the complement of the initial space and
/// ranging in the complement of the final space, scaled to ||C|| = rho.
RowContractionExt random_extension(const VbReport& vb, std::uint64_t seed, double rho);

/// Largest error of K_n = sum_j D_j K_{n-e_j} over 1 <= |n| <= N.
double resolvent_identity_error(const CommHerglotzSpace& space, const RowContractionExt& D);

/// phi_D(L^a) = K_0* D_{i1} ... D_{ik} K_0 up to the given length.
MomentFunctional phi_from_extension(const CommHerglotzSpace& space, const RowContractionExt& D, int level);

/// Free Schur pair (B^L, B^R) of phi_D at the given truncation (defaults to
/// N).  Im H(0) is copied from mu_b so the symmetrization reproduces b.
std::pair<FreeSeries, FreeSeries> lift_from_extension(const CommHerglotzSpace& space, const RowContractionExt& D,
                                                      int level = -1);

struct FreeLiftReport {
  double series_error = 0.0;
  double moment_error = 0.0;
  double tolerance = 1e-9;
  bool pass = false;
};

/// Compares up to min(B.N, b.N).
FreeLiftReport check_free_lift(const FreeSeries& B, const CommSeries& b, double tol = 1e-9);

/// Distance between D and the compression of the GNS row isometry of phi_D to
/// the symmetric subspace, on the span of K_n with |n| <= N-1.
double dilation_error(const CommHerglotzSpace& space, const RowContractionExt& D);

/// Fiber sums of the free Gram of a lift against symmetric_gram (S* G S - G_s).
double symmetric_gram_compression_error(const MomentFunctional& phi, const CommMomentFunctional& mu);

/// Complementary range space of I - M_b M_b* on truncated H^2_d, written in
/// the ON basis z^k sqrt(c_k).
struct CommDbrSpace {
  CommSeries b;
  Mat D;
  PsdFactor factor;
  Mat to_coords;
  Mat from_coords;
  Mat P_H;
  Eigen::VectorXd sqrt_weight;  // sqrt(c_k) per raw index

  int rank() const { return factor.rank; }
  int dim() const { return static_cast<int>(D.rows()); }
  /// f(0) from ON coordinates (m x rank).
  Mat eval_empty() const { return from_coords.topRows(b.m); }
  /// ON basis vector of a coefficient vector (power series coefficients by multi index).
  Mat from_series(const Mat& coeffs) const;
};

CommDbrSpace comm_dbr_space(const CommSeries& b, const DbrOptions& opts = {});

/// Coefficient-basis matrix of multiplication by f (block (k, q) = f_{k-q}).
Mat comm_mult_matrix(const CommSeries& f);

/// Weighted Cauchy transform H^2(mu_b) -> H(b): K_n e_i -> (I - b) K_n e_i.
WeightedCauchy comm_weighted_cauchy(const CommHerglotzSpace& space, const CommDbrSpace& target);

struct CH2Report {
  Mat C;                          // H(B) coordinates -> H(b) coordinates
  double coisometry_defect = 0.0; // || C C* - I ||
  double projection_error = 0.0;  // C against the symmetric projection of Fock coefficients
  double compression_error = 0.0; // E* D_B E against the intrinsic D_b
};

/// B is the left series; the dB-R space of the chosen side is used.
/// Throws DegenerateError unless B is a free lift of b.
CH2Report c_h2(const FreeSeries& B, const CommSeries& b, Side side);

/// F_b = C_{H^2} F_R P on the symmetric subspace of the GNS space of mu_B.
double freeabel_factorization_error(const FreeSeries& B, const CommSeries& b);

struct CommGleason {
  std::vector<Mat> b_sol;   // H(b) coordinates, rank x m per letter
  std::vector<CommSeries> b_series;
  std::vector<Mat> X_adj;   // X_j* on H(b) coordinates
  double gleason_residual = 0.0;    // z b_sol(z) - (b(z) - b(0))
  double b_contractivity = 0.0;     // max eig of sum_j b_j*b_j - (I - b0*b0)
  double X_consistency = 0.0;       // kernel-column definition residual
  double X_contractivity = 0.0;     // max eig of sum_j X_j X_j* - (I - E*E)
};

/// b[D]_j = F_b(D_j* K_0 (I - b(0))) and X[D] from X_j* k_n = k_{n-e_j} - b[D]_j b_n*.
CommGleason comm_gleason(const CommHerglotzSpace& space, const RowContractionExt& D, const CommDbrSpace& target);

}  // namespace freeclark
