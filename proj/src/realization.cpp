#include "freeclark/realization.hpp"

#include <algorithm>
#include <cmath>

namespace freeclark {

Mat Colligation::block() const {
  const int r = state_dim(), mm = m(), dd = d();
  Mat U = Mat::Zero(dd * r + mm, r + mm);
  for (int j = 0; j < dd; ++j) {
    U.block(j * r, 0, r, r) = A[j];
    U.block(j * r, r, r, mm) = Bblk[j];
  }
  U.block(dd * r, 0, mm, r) = C;
  U.block(dd * r, r, mm, mm) = D;
  return U;
}

Colligation free_colligation(const FreeSeries& B, Side side, int N) {
  if (N < 0) N = B.N;
  require_non_unital(B);
  const FreeSeries Bn = B.truncated(N);
  const FreeSeries Bside = side == Side::Right ? transpose_series(Bn) : Bn;
  const FreeSeries Bwide = side == Side::Right ? transpose_series(B) : B;
  const DbrSpace s = dbr_space(Bside, side);
  const std::vector<Mat> Bhat = gleason_B(Bwide, side, N);
  Colligation c;
  c.A = gleason_X(s, Bhat);
  for (const Mat& bh : Bhat) c.Bblk.push_back(s.to_coords * bh);
  c.C = s.eval_empty();
  c.D = Bn[0];
  c.safe_degree = N - 1;
  const TruncatedFock fock(B.d, B.m, N);
  c.safe_states = s.kernel_coords().leftCols(N >= 1 ? fock.dim_upto(N - 1) : 0);
  return c;
}

Mat transfer_eval(const Colligation& c, const NCPoint& p) {
  if (p.d() != c.d()) throw DimensionError("transfer_eval: point has the wrong number of variables");
  const int n = p.n, r = c.state_dim(), m = c.m();
  Mat ZA = Mat::Zero(n * r, n * r), ZB = Mat::Zero(n * r, n * m);
  for (int j = 0; j < c.d(); ++j) {
    ZA += kron(p.Z[j], c.A[j]);
    ZB += kron(p.Z[j], c.Bblk[j]);
  }
  const Mat In = Mat::Identity(n, n);
  Mat X;
  if (p.nilpotent_order > 0) {
    // Finite Neumann series: (ZA)^k vanishes once k reaches the nilpotency order.
    X = ZB;
    Mat term = ZB;
    for (int k = 1; k < p.nilpotent_order; ++k) {
      term = ZA * term;
      X += term;
    }
  } else {
    Eigen::ComplexEigenSolver<Mat> es(ZA, false);
    const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
    if (!(rho < 1.0)) throw Error("transfer_eval: resolvent does not converge (spectral radius " + std::to_string(rho) + ")");
    X = (Mat::Identity(n * r, n * r) - ZA).partialPivLu().solve(ZB);
  }
  return kron(In, c.D) + kron(In, c.C) * X;
}

FreeSeries transfer_coeffs(const Colligation& c, int maxdeg) {
  FreeSeries F(c.d(), c.m(), maxdeg);
  const WordTable& w = *F.words;
  F[0] = c.D;
  // prefix[a] = C A_{i1} ... A_{ik} for the word a = i1...ik.
  std::vector<Mat> prefix(w.size());
  prefix[0] = c.C;
  for (int a = 1; a < w.size(); ++a) {
    const Word& word = w.word(a);
    const int head = w.index(word.substr(0, word.size() - 1));
    const int last = letter_of(word.back()) - 1;
    F[a] = prefix[head] * c.Bblk[last];
    prefix[a] = prefix[head] * c.A[last];
  }
  return F;
}

ColligationDefects colligation_defects(const Colligation& c) {
  const Mat U = c.block();
  const int rows = static_cast<int>(U.rows()), cols = static_cast<int>(U.cols());
  ColligationDefects out;
  const Mat UU = U * U.adjoint() - Mat::Identity(rows, rows);
  out.coisometry_full = op_norm(UU);
  out.isometry = op_norm(U.adjoint() * U - Mat::Identity(cols, cols));
  out.contraction = std::max(0.0, op_norm(U) - 1.0);
  const int r = c.state_dim(), m = c.m(), k = static_cast<int>(c.safe_states.cols());
  if (c.safe_degree < 0 || k == 0) {
    out.coisometry_safe = op_norm(UU.bottomRightCorner(m, m));
    return out;
  }
  Mat S = Mat::Zero(rows, c.d() * k + m);
  for (int j = 0; j < c.d(); ++j) S.block(j * r, j * k, r, k) = c.safe_states;
  S.bottomRightCorner(m, m).setIdentity();
  const Mat Q = orth(S, 1e-10);
  out.coisometry_safe = op_norm(Q.adjoint() * UU * Q);
  return out;
}

int observability_rank(const Colligation& c, int maxlen, double rel_tol) {
  const std::shared_ptr<const WordTable> w = word_table(c.d(), maxlen);
  const int m = c.m();
  Mat O(w->size() * m, c.state_dim());
  std::vector<Mat> prefix(w->size());
  prefix[0] = c.C;
  O.topRows(m) = c.C;
  for (int a = 1; a < w->size(); ++a) {
    const Word& word = w->word(a);
    prefix[a] = prefix[w->index(word.substr(0, word.size() - 1))] * c.A[letter_of(word.back()) - 1];
    O.middleRows(a * m, m) = prefix[a];
  }
  if (O.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(O);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++rank;
  return rank;
}

Colligation comm_colligation_from_free(const Colligation& c, const Mat& CH2) {
  if (CH2.cols() != c.state_dim()) throw DimensionError("comm_colligation_from_free: C_H2 has the wrong width");
  Colligation out;
  for (int j = 0; j < c.d(); ++j) {
    out.A.push_back(CH2 * c.A[j] * CH2.adjoint());
    out.Bblk.push_back(CH2 * c.Bblk[j]);
  }
  out.C = c.C * CH2.adjoint();
  out.D = c.D;
  return out;
}

Colligation comm_colligation_from_D(const CommHerglotzSpace& space, const RowContractionExt& D,
                                    const CommDbrSpace& target) {
  const CommGleason g = comm_gleason(space, D, target);
  Colligation out;
  out.A = g.X_adj;
  out.Bblk = g.b_sol;
  out.C = target.eval_empty();
  out.D = target.b[0];
  const int N = target.b.N, m = target.b.m;
  if (N >= 1) {
    const MultiTable& t = *target.b.multis;
    int nlow = 0;
    while (nlow < t.size() && t.degree(nlow) <= N - 1) ++nlow;
    Mat Kc = target.to_coords * target.D.leftCols(nlow * m);
    for (int col = 0; col < Kc.cols(); ++col) Kc.col(col) *= target.sqrt_weight(col);
    out.safe_degree = N - 1;
    out.safe_states = Kc;
  }
  return out;
}

double colligation_distance(const Colligation& a, const Colligation& b) {
  if (a.d() != b.d() || a.state_dim() != b.state_dim() || a.m() != b.m())
    throw DimensionError("colligation_distance: shape mismatch");
  double e = max_abs(a.C - b.C);
  e = std::max(e, max_abs(a.D - b.D));
  for (int j = 0; j < a.d(); ++j) {
    e = std::max(e, max_abs(a.A[j] - b.A[j]));
    e = std::max(e, max_abs(a.Bblk[j] - b.Bblk[j]));
  }
  return e;
}

Mat comm_transfer_eval(const Colligation& c, const std::vector<cplx>& z) {
  if (static_cast<int>(z.size()) != c.d()) throw DimensionError("comm_transfer_eval: wrong number of variables");
  const int r = c.state_dim();
  Mat za = Mat::Zero(r, r), zb = Mat::Zero(r, c.m());
  for (int j = 0; j < c.d(); ++j) {
    za += z[j] * c.A[j];
    zb += z[j] * c.Bblk[j];
  }
  if (r > 0) {
    Eigen::ComplexEigenSolver<Mat> es(za, false);
    const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
    if (!(rho < 1.0)) throw Error("comm_transfer_eval: resolvent does not converge (spectral radius " + std::to_string(rho) + ")");
  }
  return c.D + c.C * (Mat::Identity(r, r) - za).partialPivLu().solve(zb);
}

double comm_tail_bound(double r, int K) {
  if (!(r < 1.0)) throw ConfigError("comm_tail_bound: r must be below 1");
  return std::pow(r, K + 1) / (1.0 - r);
}

}  // namespace freeclark
