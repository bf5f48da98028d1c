#include "freeclark/clark.hpp"

#include <algorithm>

namespace freeclark {

namespace {

FreeSeries one_minus(const FreeSeries& B) { return FreeSeries::identity(B.d, B.m, B.N) - B; }

double unitarity_defect(const Mat& W) {
  const int r = static_cast<int>(W.rows()), c = static_cast<int>(W.cols());
  return std::max(op_norm(W.adjoint() * W - Mat::Identity(c, c)), op_norm(W * W.adjoint() - Mat::Identity(r, r)));
}

// Index of b with a = j b (Right) or a = b j (Left), -1 otherwise.
int strip_letter(const WordTable& t, int a, int j, Side side) {
  const Word& w = t.word(a);
  if (w.empty()) return -1;
  if (side == Side::Right) return letter_of(w.front()) == j ? t.index(w.substr(1)) : -1;
  return letter_of(w.back()) == j ? t.index(w.substr(0, w.size() - 1)) : -1;
}

}  // namespace

DbrSpace dbr_space(const FreeSeries& Bside, Side side, const DbrOptions& opts) {
  DbrSpace s;
  s.B = Bside;
  s.side = side;
  s.D = dbr_kernel(Bside, side).G;
  s.factor = psd_factor(s.D, opts.rank_tol);
  if (s.factor.min_eig < -opts.psd_tol * std::max(1.0, s.factor.lambda_max))
    throw NotPositiveError("B is not a contraction: I - M_B M_B* has eigenvalue " +
                           std::to_string(s.factor.min_eig));
  s.to_coords = s.factor.coords_pinv().adjoint();
  s.from_coords = s.factor.coords().adjoint();
  s.P_H = s.factor.V * s.factor.V.adjoint();
  return s;
}

std::vector<Mat> gleason_B(const FreeSeries& Bside, Side side, int N) {
  const TruncatedFock fock(Bside.d, Bside.m, N);
  const WordTable& t = fock.words();
  const int m = Bside.m;
  std::vector<Mat> out;
  out.reserve(Bside.d);
  for (int j = 1; j <= Bside.d; ++j) {
    Mat v = Mat::Zero(fock.dim(), m);
    for (int a = 0; a < t.size(); ++a) {
      const Word w = side == Side::Right ? letter_char(j) + t.word(a) : t.word(a) + letter_char(j);
      v.middleRows(a * m, m) = Bside.coeff(w);
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Mat> gleason_X(const DbrSpace& s, const std::vector<Mat>& Bhat) {
  const int m = s.m();
  const WordTable& t = *s.B.words;
  std::vector<Mat> out;
  out.reserve(s.d());
  for (int j = 1; j <= s.d(); ++j) {
    Mat Y = Mat::Zero(s.dim(), s.dim());
    for (int g = 0; g < t.size(); ++g) {
      const int b = strip_letter(t, g, j, s.side);
      if (b >= 0) Y.middleCols(g * m, m) = s.D.middleCols(b * m, m);
      Y.middleCols(g * m, m) -= Bhat[j - 1] * s.B[g].adjoint();
    }
    out.push_back(s.to_coords * Y * s.to_coords.adjoint());
  }
  return out;
}

Mat cauchy_transform(const GnsSpace& g) { return g.gram * g.factor.coords_pinv(); }

WeightedCauchy weighted_cauchy(const GnsSpace& g, const DbrSpace& s) {
  const int N = s.N();
  Mat Gsrc, rep;
  if (g.phi.N == N) {
    Gsrc = g.gram;
    rep = g.factor.coords_pinv();
  } else if (g.phi.N == N + 1) {
    const int n = s.dim();
    Gsrc = g.gram.topLeftCorner(n, n);
    rep = g.safe_rep;
  } else {
    throw DimensionError("weighted_cauchy: GNS truncation must be N or N+1");
  }
  if (g.phi.d != s.d() || g.phi.m != s.m()) throw DimensionError("weighted_cauchy: size mismatch");

  const TruncatedFock fock(s.d(), s.m(), N);
  // Left images use the transposed Herglotz kernel, U_T K^R U_T, read at a^T.
  Mat R = mult_matrix(one_minus(s.B), s.side, fock);
  if (s.side == Side::Left) R = R * Mat(transposition_unitary(fock));
  const Mat img = R * Gsrc * rep;

  WeightedCauchy w;
  w.W = s.to_coords * img;
  const Mat res = img - s.P_H * img;
  w.leak = max_abs(res) / std::max(1.0, max_abs(img));
  if (w.leak > 1e-8) w.warning = "truncation leak: weighted Cauchy image leaves ran D (" + std::to_string(w.leak) + ")";
  return w;
}

TranspositionReport transposition_W(const FreeSeries& B) {
  const GnsSpace g = build_gns(moments_from_schur(B));
  const DbrSpace sR = dbr_space(transpose_series(B), Side::Right);
  const DbrSpace sL = dbr_space(B, Side::Left);
  const Mat FR = weighted_cauchy(g, sR).W;
  const Mat FL = weighted_cauchy(g, sL).W;
  TranspositionReport r;
  r.W = FL * FR.adjoint();
  const TruncatedFock fock(B.d, B.m, B.N);
  const Mat UT(transposition_unitary(fock));
  r.transposition_error = max_abs(sL.from_coords * r.W - UT * sR.from_coords);
  r.unitarity_defect = unitarity_defect(r.W);
  return r;
}

ClarkReport verify_clark(const FreeSeries& B, int N) {
  if (N < 0) N = B.N;
  require_non_unital(B);
  const int d = B.d, m = B.m;
  const FreeSeries BR = transpose_series(B.truncated(N));
  const FreeSeries BR1 = transpose_series(B.truncated(N + 1));
  const DbrSpace s = dbr_space(BR, Side::Right);
  const GnsSpace g = build_gns(moments_from_schur(B.truncated(N + 1)));
  const WeightedCauchy wc = weighted_cauchy(g, s);
  const Mat& F = wc.W;

  const TruncatedFock fock(d, m, N);
  const WordTable& t = fock.words();
  const int degB = std::max(0, B.truncated(N).degree(1e-14));

  ClarkReport r;
  r.safe_degree = N - degB - 1;
  r.dbr_rank = s.rank();
  r.gns_rank = g.rank();
  r.leak = wc.leak;
  r.transform_defect = unitarity_defect(F);

  const std::vector<Mat> Bhat = gleason_B(BR1, Side::Right, N);
  const std::vector<Mat> Xs = gleason_X(s, Bhat);
  const Mat B0 = BR[0];
  const Mat inv = (Mat::Identity(m, m) - B0).inverse();
  const Mat k0 = s.eval_empty();
  const Mat kc = s.kernel_coords();
  const int nsafe = r.safe_degree >= 0 ? fock.dim_upto(r.safe_degree) : 0;
  const int nlow = N >= 1 ? fock.dim_upto(N - 1) : 0;

  Mat contr = -(Mat::Identity(m, m) - B0.adjoint() * B0);
  for (int j = 1; j <= d; ++j) {
    const Mat& bh = Bhat[j - 1];
    const Mat bc = s.to_coords * bh;
    contr += bc.adjoint() * bc;

    const Mat Q = g.piL[j - 1].adjoint() * g.safe_basis;
    const Mat lhs = F * Q * F.adjoint();
    const Mat rhs = Xs[j - 1] + bc * inv * k0;
    const Mat diff = lhs - rhs;
    r.lhs_rhs_error_full = std::max(r.lhs_rhs_error_full, max_abs(diff));
    if (nsafe > 0) r.lhs_rhs_error = std::max(r.lhs_rhs_error, max_abs(diff * kc.leftCols(nsafe)));

    // Backward shift of the kernel columns, coefficientwise.
    for (int a = 0; a < nlow / m; ++a) {
      const int ja = t.extend(a, j, Side::Left);
      for (int gi = 0; gi < t.size(); ++gi) {
        Mat expect = -bh.middleRows(a * m, m) * BR[gi].adjoint();
        const int b = strip_letter(t, gi, j, Side::Right);
        if (b >= 0) expect += s.D.block(a * m, b * m, m, m);
        r.kernel_identity_error =
            std::max(r.kernel_identity_error, max_abs(s.D.block(ja * m, gi * m, m, m) - expect));
      }
    }

    // Perturbed operator on kernel columns in Fock coordinates.
    const Mat lhsFock = s.from_coords * lhs * kc;
    for (int gi = 0; gi < nsafe / m; ++gi) {
      Mat expect = -bh * inv * BR[gi].adjoint();
      if (gi == 0) expect += bh * inv;
      const int b = strip_letter(t, gi, j, Side::Right);
      if (b >= 0) expect += s.D.middleCols(b * m, m);
      r.clarkB_error = std::max(r.clarkB_error, max_abs(lhsFock.middleCols(gi * m, m) - expect));
    }

    // (X_j* f)_a = f_{ja} on |a| <= N-1.
    const Mat shifted = s.from_coords * Xs[j - 1];
    for (int a = 0; a < nlow / m; ++a) {
      const int ja = t.extend(a, j, Side::Left);
      r.gleason_shift_error = std::max(
          r.gleason_shift_error, max_abs(shifted.middleRows(a * m, m) - s.from_coords.middleRows(ja * m, m)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (contr + contr.adjoint()), Eigen::EigenvaluesOnly);
  r.gleason_contractivity = es.eigenvalues().maxCoeff();
  return r;
}

ClarkFamilyReport clark_family(const FreeSeries& B, const Mat& U, int N) {
  if (N < 0) N = B.N;
  if (U.rows() != B.m || U.cols() != B.m) throw DimensionError("clark_family: U must be m x m");
  if (op_norm(U.adjoint() * U - Mat::Identity(B.m, B.m)) > 1e-12) throw ConfigError("clark_family: U is not unitary");
  const FreeSeries BU = B.times_constant(U.adjoint());
  ClarkFamilyReport r;
  const Mat D0 = dbr_kernel(transpose_series(B.truncated(N)), Side::Right).G;
  const Mat D1 = dbr_kernel(transpose_series(BU.truncated(N)), Side::Right).G;
  r.D_invariance = max_abs(D0 - D1);
  r.clark = verify_clark(BU, N);
  return r;
}

GleasonUniqueness gleason_uniqueness(const FreeSeries& BR) {
  const int N = BR.N, d = BR.d, m = BR.m;
  GleasonUniqueness out;
  if (N < 1) return out;
  const WordTable& t = *BR.words;
  const int nu = t.degree_start(N);  // words of length <= N-1
  const int nc = t.size() - 1;       // words of length 1..N
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nc, d * nu);
  Mat rhs(nc * 1, m * m);
  for (int g = 1; g < t.size(); ++g) {
    const int j = letter_of(t.word(g).front());
    const int a = t.index(t.word(g).substr(1));
    A(g - 1, (j - 1) * nu + a) = 1.0;
    const Mat& c = BR[g];
    for (int k = 0; k < m * m; ++k) rhs(g - 1, k) = c(k / m, k % m);
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  out.nullity = static_cast<int>(A.cols()) - static_cast<int>(cod.rank());
  const Mat X = cod.pseudoInverse().cast<cplx>() * rhs;
  out.residual = max_abs(A.cast<cplx>() * X - rhs);
  const std::vector<Mat> gb = gleason_B(BR, Side::Right, N - 1);
  for (int j = 1; j <= d; ++j)
    for (int a = 0; a < nu; ++a) {
      Mat c(m, m);
      for (int k = 0; k < m * m; ++k) c(k / m, k % m) = X((j - 1) * nu + a, k);
      out.distance = std::max(out.distance, max_abs(c - gb[j - 1].middleRows(a * m, m)));
    }
  return out;
}

}  // namespace freeclark
