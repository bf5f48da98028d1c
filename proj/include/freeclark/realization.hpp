#pragma once

#include "freeclark/commutative.hpp"

namespace freeclark {

/// Colligation [A B; C D] with A = (A_1; ...; A_d) acting state -> state (x) C^d.
/// Transfer function: D + C (I - sum_j Z_j A_j)^{-1} (sum_j Z_j B_j), so the
/// coefficient of i1...ik is C A_{i1} ... A_{i(k-1)} B_{ik}.
struct Colligation {
  std::vector<Mat> A;     // state x state per letter
  std::vector<Mat> Bblk;  // state x m per letter
  Mat C;                  // m x state
  Mat D;                  // m x m
  /// Largest degree on which kernel vectors span the safe input block (-1 if unknown).
  int safe_degree = -1;
  /// Kernel vectors of degree <= safe_degree in state coordinates (state x k).
  Mat safe_states;

  int d() const { return static_cast<int>(A.size()); }
  int m() const { return static_cast<int>(D.rows()); }
  int state_dim() const { return static_cast<int>(C.cols()); }
  /// Block operator state (+) C^m -> (state (x) C^d) (+) C^m.
  Mat block() const;
};

/// Canonical dB-R colligation of the side-appropriate space at truncation N
/// (N = -1 means B.N).  B is the left series; extra coefficients beyond N are
/// used for the top Gleason block.
Colligation free_colligation(const FreeSeries& B, Side side, int N = -1);

/// I_n (x) D + (I_n (x) C)(I - sum Z_j (x) A_j)^{-1}(sum Z_j (x) B_j).
/// Throws Error when the resolvent does not converge.
Mat transfer_eval(const Colligation& c, const NCPoint& p);

/// Free series of transfer coefficients up to maxdeg.
FreeSeries transfer_coeffs(const Colligation& c, int maxdeg);

struct ColligationDefects {
  double coisometry_safe = 0.0;  // || Q*(U U* - I) Q || on the safe input block
  double coisometry_full = 0.0;
  double isometry = 0.0;         // || U*U - I ||
  double contraction = 0.0;      // max(0, ||U|| - 1)
};

ColligationDefects colligation_defects(const Colligation& c);

/// Rank of f -> (C A_{i1} ... A_{ik} f) over words of length <= maxlen.
int observability_rank(const Colligation& c, int maxlen, double rel_tol = 1e-8);

/// a_j = C A_j C*, b_j = C B_j, c = C_out C*, d unchanged.
Colligation comm_colligation_from_free(const Colligation& c, const Mat& CH2);

/// [X[D]*, b[D]; k_0*, b(0)] in H(b) coordinates.
Colligation comm_colligation_from_D(const CommHerglotzSpace& space, const RowContractionExt& D,
                                    const CommDbrSpace& target);

/// Largest blockwise difference between two colligations of equal shape.
double colligation_distance(const Colligation& a, const Colligation& b);

/// d + c (I - sum z_j a_j)^{-1} (sum z_j b_j) at a scalar point.
Mat comm_transfer_eval(const Colligation& c, const std::vector<cplx>& z);

/// Tail bound r^{K+1} / (1 - r) for a Schur function truncated after degree K at ||z|| = r.
double comm_tail_bound(double r, int K);

}  // namespace freeclark
