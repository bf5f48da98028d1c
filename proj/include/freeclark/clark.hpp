#pragma once

#include <string>

#include "freeclark/gns.hpp"
#include "freeclark/kernels.hpp"

namespace freeclark {

struct DbrOptions {
  double rank_tol = 1e-10;
  double psd_tol = 1e-9;
};

/// Complementary range space of D = I - M_B M_B* on the truncated Fock space,
/// with inner product <f, D^+ g> and ON coordinates c = Sigma^{-1/2} U* f.
struct DbrSpace {
  FreeSeries B;  // the series acting on this side
  Side side = Side::Right;
  Mat D;
  PsdFactor factor;
  Mat to_coords;    // rank x dim, f in ran D -> coordinates
  Mat from_coords;  // dim x rank, coordinates -> Fock coefficient vector
  Mat P_H;          // Euclidean projection onto ran D

  int N() const { return B.N; }
  int m() const { return B.m; }
  int d() const { return B.d; }
  int rank() const { return factor.rank; }
  int dim() const { return static_cast<int>(D.rows()); }
  /// Coordinates of the kernel vectors k_a e_i (columns of D), rank x dim.
  Mat kernel_coords() const { return factor.coords(); }
  /// Evaluation of the empty-word coefficient, m x rank.
  Mat eval_empty() const { return from_coords.topRows(B.m); }
};

/// Bside is the series for the chosen side (B^R for Right).  Throws when D is not PSD.
DbrSpace dbr_space(const FreeSeries& Bside, Side side, const DbrOptions& opts = {});

/// Gleason solution as Fock coefficient vectors (dim x m per letter):
/// Right: (B_j)_a = B_{ja}; Left: (B_j)_a = B_{aj}.  Coefficients of B up to
/// B.N are used, so a series with one extra degree gives the exact top block.
std::vector<Mat> gleason_B(const FreeSeries& Bside, Side side, int N);

/// Adjoint Gleason row X_j* in ON coordinates, defined through its action on
/// kernel vectors: X_j* k_g = [g = j b] k_b - B_j B_g*.
std::vector<Mat> gleason_X(const DbrSpace& space, const std::vector<Mat>& Bhat);

/// Cauchy transform in raw form: column (a,i) is the Herglotz coefficient
/// vector of pi(L)^a [I (x)] e_i, i.e. the GNS Gram column.  Returned as a map
/// from GNS ON coordinates (dim x rank).
Mat cauchy_transform(const GnsSpace& g);

struct WeightedCauchy {
  /// dB-R coordinates x source coordinates.  The source is the full GNS space
  /// when g has the same truncation as the dB-R space, and the span of degree
  /// <= N when g is one degree deeper.
  Mat W;
  double leak = 0.0;
  std::string warning;
};

WeightedCauchy weighted_cauchy(const GnsSpace& g, const DbrSpace& space);

struct TranspositionReport {
  Mat W;                            // H^R(B) -> H^L(B) in ON coordinates
  double transposition_error = 0.0; // || from_L W - U_T from_R ||
  double unitarity_defect = 0.0;
};

/// B is the left series; H^R uses its transpose.
TranspositionReport transposition_W(const FreeSeries& B);

struct ClarkReport {
  int safe_degree = 0;
  double lhs_rhs_error = 0.0;       // operator identity on kernel vectors of degree <= safe_degree
  double lhs_rhs_error_full = 0.0;  // same on the whole truncated space
  double kernel_identity_error = 0.0;  // coefficientwise shift identity for the kernel vectors
  double clarkB_error = 0.0;        // coefficientwise perturbation identity, degree <= safe_degree
  double transform_defect = 0.0;    // unitarity defect of the weighted Cauchy transform
  double gleason_shift_error = 0.0; // (X_j* f)_a = f_{ja} for |a| <= N-1
  double gleason_contractivity = 0.0;  // max eig of sum_j B_j*B_j - (I - B_0*B_0)
  double leak = 0.0;
  int dbr_rank = 0;
  int gns_rank = 0;
};

/// B is the left series; the identity is checked in H^R(B) at truncation N
/// (N = -1 means B.N).  B must be a polynomial of degree <= N or carry at
/// least one extra degree of coefficients.
ClarkReport verify_clark(const FreeSeries& B, int N = -1);

struct ClarkFamilyReport {
  double D_invariance = 0.0;
  ClarkReport clark;
};

ClarkFamilyReport clark_family(const FreeSeries& B, const Mat& U, int N = -1);

struct GleasonUniqueness {
  int nullity = 0;
  double distance = 0.0;  // least-squares solution vs gleason_B
  double residual = 0.0;
};

/// Solves Z B_hat(Z) = B(Z) - B_0 for unknown coefficients of degree <= N-1.
GleasonUniqueness gleason_uniqueness(const FreeSeries& BR);

}  // namespace freeclark
