#pragma once

#include "freeclark/herglotz.hpp"
#include "freeclark/linalg.hpp"

namespace freeclark {

struct GnsOptions {
  /// Eigenvalues below rank_tol * lambda_max are treated as null.
  double rank_tol = 1e-10;
  /// Relative tolerance for the Gram positivity check.
  double psd_tol = 1e-9;
};

/// Truncated GNS space of a moment functional: raw basis L^a (x) e_i for
/// |a| <= N, quotiented by the null space of the Gram matrix.
struct GnsSpace {
  MomentFunctional phi;
  Mat gram;                // raw Gram, rows/cols indexed by (word, i)
  PsdFactor factor;
  Mat coords;              // rank x raw: raw vector -> ON coordinates
  Mat safe_basis;          // rank x safe_rank: ON basis of the span of degree <= N-1
  Mat safe_rep;            // raw(<= N-1) x safe_rank: raw representatives of safe_basis
  std::vector<Mat> piL;    // rank x safe_rank: pi(L_j) restricted to the safe span
  Mat embed;               // rank x m: h -> [I (x)] h

  int rank() const { return factor.rank; }
  int safe_rank() const { return static_cast<int>(safe_basis.cols()); }
  int raw_dim() const { return static_cast<int>(gram.rows()); }
  int safe_raw_dim() const { return static_cast<int>(safe_rep.rows()); }
};

/// gram[(a,i),(b,j)] = phi((L^a)* L^b)_{ij}.
Mat gns_gram(const MomentFunctional& phi);

/// Throws NotPositiveError when the Gram fails the level-N positivity check.
GnsSpace build_gns(const MomentFunctional& phi, const GnsOptions& opts = {});

/// max over |a| <= N-1 of ||phi(L^a) - embed* pi(L)^a embed||.
double stinespring_check(const GnsSpace& g);

struct RowIsometryDefect {
  double isometry_defect = 0.0;
  double cuntz_defect = 0.0;
};

RowIsometryDefect row_isometry_defect(const GnsSpace& g);

/// Largest squared distance from [I (x)] h (||h|| = 1) to span{L^n (x) C^m : 1 <= |n| <= N}.
double quasi_extreme_indicator(const GnsSpace& g);
double quasi_extreme_indicator(const MomentFunctional& phi, const GnsOptions& opts = {});

/// Raw vectors sum_{lambda(a)=n} e_a (x) e_i as columns (multi index * m + i), 0 <= |n| <= N.
Mat symmetric_raw_vectors(const WordTable& words, int m);

}  // namespace freeclark
