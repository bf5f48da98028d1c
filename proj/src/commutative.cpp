#include "freeclark/commutative.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace freeclark {

namespace {

bool dominates(const MultiIndex& a, const MultiIndex& b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] < b[k]) return false;
  return true;
}

MultiIndex diff(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex r(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] - b[k];
  return r;
}

Mat complex_gaussian(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat A(r, c);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < c; ++k) A(i, k) = cplx(nd(rng), nd(rng));
  return A;
}

double max_eig(const Mat& H) {
  if (H.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (H + H.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

// Series coefficient blocks (raw x m) of a vector in H^2(mu_b) ON coordinates.
Mat series_of(const CommHerglotzSpace& s, const Mat& x) { return s.coords.adjoint() * x; }

}  // namespace

CommMomentFunctional::CommMomentFunctional(int d_, int m_, int N_)
    : d(d_), m(m_), N(N_), multis(multi_table(d_, N_)) {
  mu_I = Mat::Zero(m, m);
  imag_I = Mat::Zero(m, m);
  moments.assign(multis->size(), Mat::Zero(m, m));
}

const Mat& CommMomentFunctional::moment(const MultiIndex& n) const {
  const int i = multis->index(n);
  if (i < 0) throw ConfigError("moment index outside the truncation");
  return moments[i];
}

void CommMomentFunctional::set(int i, const Mat& v) {
  moments[i] = v;
  if (i == 0) mu_I = v;
}

CommSeries comm_cayley(const CommSeries& b) {
  if (op_norm(b[0]) >= 1.0 - kNonUnitalMargin) throw NonUnitalError("comm_cayley: ||b(0)|| is not below 1");
  const CommSeries I = CommSeries::identity(b.d, b.m, b.N);
  return comm_multiply(comm_invert(I - b), I + b);
}

CommSeries comm_cayley_inv(const CommSeries& H) {
  const CommSeries I = CommSeries::identity(H.d, H.m, H.N);
  return comm_multiply(comm_invert(H + I), H - I);
}

CommMomentFunctional comm_moments(const CommSeries& b) {
  const CommSeries H = comm_cayley(b);
  CommMomentFunctional mu(b.d, b.m, b.N);
  const Mat re = 0.5 * (H[0] + H[0].adjoint());
  if (!psd_check(re).pass) throw NotHerglotzError("comm_moments: Re H_b(0) is not PSD");
  mu.set(0, re);
  mu.imag_I = 0.5 * (H[0] - H[0].adjoint());
  for (int i = 1; i < H.size(); ++i) mu.set(i, 0.5 * H[i].adjoint());
  return mu;
}

CommSeries comm_herglotz_from_moments(const CommMomentFunctional& mu) {
  CommSeries H(mu.d, mu.m, mu.N);
  H[0] = mu.mu_I + mu.imag_I;
  for (int i = 1; i < H.size(); ++i) H[i] = 2.0 * mu[i].adjoint();
  return H;
}

Mat symmetric_gram(const CommMomentFunctional& mu) {
  const MultiTable& t = *mu.multis;
  const int m = mu.m;
  Mat G = Mat::Zero(t.size() * m, t.size() * m);
  for (int n = 0; n < t.size(); ++n) {
    for (int k = 0; k < t.size(); ++k) {
      const MultiIndex& a = t.item(n);
      const MultiIndex& c = t.item(k);
      if (dominates(c, a)) {
        G.block(n * m, k * m, m, m) = weight(t, n) * mu[t.index(diff(c, a))];
      } else if (dominates(a, c)) {
        G.block(n * m, k * m, m, m) = weight(t, k) * mu[t.index(diff(a, c))].adjoint();
      }
    }
  }
  return G;
}

CommHerglotzSpace build_herglotz_space(const CommMomentFunctional& mu, const GnsOptions& opts) {
  CommHerglotzSpace s;
  s.mu = mu;
  s.gram = symmetric_gram(mu);
  s.factor = psd_factor(s.gram, opts.rank_tol);
  if (s.factor.min_eig < -opts.psd_tol * std::max(1.0, s.factor.lambda_max))
    throw NotPositiveError("symmetric Gram is not PSD (eigenvalue " + std::to_string(s.factor.min_eig) + ")");
  s.coords = s.factor.coords();
  return s;
}

double comm_quasi_extreme_indicator(const CommHerglotzSpace& s) {
  const int m = s.mu.m;
  const Mat Y0 = s.K(0);
  if (s.raw_dim() <= m) return op_norm(Y0.adjoint() * Y0);
  const Mat Q = orth(s.coords.rightCols(s.raw_dim() - m), 1e-10);
  const Mat R = Y0 - Q * (Q.adjoint() * Y0);
  return op_norm(R.adjoint() * R);
}

int RowContractionExt::d() const { return row.rows() == 0 ? 0 : static_cast<int>(row.cols() / row.rows()); }

Mat RowContractionExt::D(int j) const {
  const int r = static_cast<int>(row.rows());
  return row.middleCols((j - 1) * r, r);
}

VbReport build_Vb(const CommHerglotzSpace& s) {
  const MultiTable& t = *s.mu.multis;
  const int d = s.mu.d, m = s.mu.m, r = s.rank();
  const int cols = (t.size() - 1) * m;
  Mat T = Mat::Zero(r * d, cols), K = Mat::Zero(r, cols);
  for (int n = 1; n < t.size(); ++n) {
    K.middleCols((n - 1) * m, m) = s.K(n);
    for (int j = 1; j <= d; ++j) {
      const int p = t.minus(n, j);
      if (p >= 0) T.block((j - 1) * r, (n - 1) * m, r, m) = s.K(p);
    }
  }
  VbReport v;
  v.V.tight = true;
  if (cols == 0 || r == 0) {
    v.V.row = Mat::Zero(r, r * d);
    v.initial = Mat::Zero(r * d, r * d);
    v.final_ = Mat::Zero(r, r);
    return v;
  }
  const Mat Tp = pinv(T, 1e-10);
  v.V.row = K * Tp;
  v.constraint_residual = max_abs(v.V.row * T - K);
  if (v.constraint_residual > 1e-8 * std::max(1.0, max_abs(K)))
    throw DegenerateError("build_Vb: constraints inconsistent (residual " + std::to_string(v.constraint_residual) + ")");
  v.initial = T * Tp;
  const Mat Q = orth(v.V.row, 1e-10);
  v.final_ = Q * Q.adjoint();
  const Mat& V = v.V.row;
  v.partial_isometry_defect = op_norm(V * V.adjoint() * V - V);
  Eigen::SelfAdjointEigenSolver<Mat> es(V.adjoint() * V, Eigen::EigenvaluesOnly);
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double e = es.eigenvalues()(i);
    v.spectrum_defect = std::max(v.spectrum_defect, std::min(std::abs(e), std::abs(e - 1.0)));
  }
  return v;
}

RowContractionExt random_extension(const VbReport& vb, std::uint64_t seed, double rho) {
  if (rho < 0.0 || rho > 1.0) throw ConfigError("random_extension: rho must lie in [0, 1]");
  const int r = static_cast<int>(vb.V.row.rows()), c = static_cast<int>(vb.V.row.cols());
  std::mt19937_64 rng(seed);
  const Mat C0 = complex_gaussian(rng, r, c);
  Mat C = (Mat::Identity(r, r) - vb.final_) * C0 * (Mat::Identity(c, c) - vb.initial);
  const double nc = op_norm(C);
  RowContractionExt out;
  out.tight = nc < 1e-12 || rho == 0.0;
  if (!out.tight) C *= rho / nc;
  out.row = out.tight ? vb.V.row : Mat(vb.V.row + C);
  return out;
}

double resolvent_identity_error(const CommHerglotzSpace& s, const RowContractionExt& D) {
  const MultiTable& t = *s.mu.multis;
  double err = 0.0;
  for (int n = 1; n < t.size(); ++n) {
    Mat acc = -s.K(n);
    for (int j = 1; j <= s.mu.d; ++j) {
      const int p = t.minus(n, j);
      if (p >= 0) acc += D.D(j) * s.K(p);
    }
    err = std::max(err, max_abs(acc));
  }
  return err;
}

MomentFunctional phi_from_extension(const CommHerglotzSpace& s, const RowContractionExt& D, int level) {
  const int d = s.mu.d, m = s.mu.m;
  MomentFunctional phi(d, m, level);
  const WordTable& w = *phi.words;
  const Mat K0 = s.K(0);
  std::vector<Mat> v(w.size());
  v[0] = K0;
  phi.set(0, K0.adjoint() * K0);
  std::vector<Mat> Dj;
  for (int j = 1; j <= d; ++j) Dj.push_back(D.D(j));
  for (int a = 1; a < w.size(); ++a) {
    const Word& word = w.word(a);
    v[a] = Dj[letter_of(word[0]) - 1] * v[w.index(word.substr(1))];
    phi.set(a, K0.adjoint() * v[a]);
  }
  return phi;
}

std::pair<FreeSeries, FreeSeries> lift_from_extension(const CommHerglotzSpace& s, const RowContractionExt& D,
                                                      int level) {
  if (level < 0) level = s.mu.N;
  const MomentFunctional phi = phi_from_extension(s, D, level);
  FreeSeries BL = cayley_to_schur(herglotz_from_moments(phi, Side::Left, s.mu.imag_I));
  FreeSeries BR = transpose_series(BL);
  return {std::move(BL), std::move(BR)};
}

FreeLiftReport check_free_lift(const FreeSeries& B, const CommSeries& b, double tol) {
  if (B.d != b.d || B.m != b.m) throw DimensionError("check_free_lift: size mismatch");
  const int N = std::min(B.N, b.N);
  const FreeSeries Bn = B.truncated(N);
  const CommSeries bn = b.truncated(N);
  FreeLiftReport r;
  r.tolerance = tol;
  const CommSeries sym = symmetrize_series(Bn);
  for (int i = 0; i < sym.size(); ++i) r.series_error = std::max(r.series_error, max_abs(sym[i] - bn[i]));
  try {
    const MomentFunctional phi = moments_from_schur(Bn);
    const CommMomentFunctional mu = comm_moments(bn);
    const std::vector<int> fib = fiber_map(*phi.words, *mu.multis);
    std::vector<Mat> sums(mu.moments.size(), Mat::Zero(b.m, b.m));
    for (int a = 0; a < phi.words->size(); ++a) sums[fib[a]] += phi[a];
    for (std::size_t i = 0; i < sums.size(); ++i) r.moment_error = std::max(r.moment_error, max_abs(sums[i] - mu[i]));
  } catch (const NonUnitalError&) {
    r.moment_error = std::numeric_limits<double>::infinity();
  }
  r.pass = r.series_error <= tol && r.moment_error <= tol;
  return r;
}

double dilation_error(const CommHerglotzSpace& s, const RowContractionExt& D) {
  const int N = s.mu.N, m = s.mu.m;
  if (N < 1) return 0.0;
  const GnsSpace g = build_gns(phi_from_extension(s, D, N));
  const Mat S = symmetric_raw_vectors(*g.phi.words, m);
  const Mat symFree = g.coords * S;  // free coordinates of the symmetric raw vectors
  const MultiTable& t = *s.mu.multis;
  int nlow = 0;
  while (nlow < t.size() && t.degree(nlow) <= N - 1) ++nlow;
  const Mat inSafe = g.safe_basis.adjoint() * symFree.leftCols(nlow * m);
  const Mat Pinv = s.factor.coords_pinv();
  double err = 0.0;
  for (int j = 1; j <= s.mu.d; ++j) {
    const Mat raw = symFree.adjoint() * g.piL[j - 1] * inSafe;  // <s_k, pi(L_j) s_n>
    const Mat compressed = Pinv.adjoint() * raw;
    err = std::max(err, max_abs(compressed - D.D(j) * s.coords.leftCols(nlow * m)));
  }
  return err;
}

double symmetric_gram_compression_error(const MomentFunctional& phi, const CommMomentFunctional& mu) {
  const Mat S = symmetric_raw_vectors(*phi.words, phi.m);
  const Mat G = gns_gram(phi);
  return max_abs(S.adjoint() * G * S - symmetric_gram(mu));
}

Mat CommDbrSpace::from_series(const Mat& coeffs) const {
  Mat y = coeffs;
  for (int i = 0; i < y.rows(); ++i) y.row(i) /= sqrt_weight(i);
  return to_coords * y;
}

CommDbrSpace comm_dbr_space(const CommSeries& b, const DbrOptions& opts) {
  CommDbrSpace s;
  s.b = b;
  const MultiTable& t = *b.multis;
  const int m = b.m, n = t.size();
  Mat dk = Mat::Zero(n * m, n * m);
  for (int k = 0; k < n; ++k) {
    for (int q = 0; q < n; ++q) {
      Mat acc = k == q ? Mat(weight(t, k) * Mat::Identity(m, m)) : Mat::Zero(m, m);
      for (int p = 0; p < n; ++p) {
        if (!dominates(t.item(k), t.item(p)) || !dominates(t.item(q), t.item(p))) continue;
        acc -= weight(t, p) * b[t.index(diff(t.item(k), t.item(p)))] * b[t.index(diff(t.item(q), t.item(p)))].adjoint();
      }
      dk.block(k * m, q * m, m, m) = acc;
    }
  }
  s.sqrt_weight.resize(n * m);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < m; ++i) s.sqrt_weight(k * m + i) = std::sqrt(weight(t, k));
  const Eigen::VectorXcd inv = s.sqrt_weight.cwiseInverse().cast<cplx>();
  s.D = inv.asDiagonal() * dk * inv.asDiagonal();
  s.factor = psd_factor(s.D, opts.rank_tol);
  if (s.factor.min_eig < -opts.psd_tol * std::max(1.0, s.factor.lambda_max))
    throw NotPositiveError("b is not a Drury-Arveson contraction: I - M_b M_b* has eigenvalue " +
                           std::to_string(s.factor.min_eig));
  s.to_coords = s.factor.coords_pinv().adjoint();
  s.from_coords = s.factor.coords().adjoint();
  s.P_H = s.factor.V * s.factor.V.adjoint();
  return s;
}

Mat comm_mult_matrix(const CommSeries& f) {
  const MultiTable& t = *f.multis;
  const int m = f.m, n = t.size();
  Mat M = Mat::Zero(n * m, n * m);
  for (int k = 0; k < n; ++k)
    for (int q = 0; q < n; ++q)
      if (dominates(t.item(k), t.item(q))) M.block(k * m, q * m, m, m) = f[t.index(diff(t.item(k), t.item(q)))];
  return M;
}

WeightedCauchy comm_weighted_cauchy(const CommHerglotzSpace& s, const CommDbrSpace& target) {
  if (s.mu.N != target.b.N || s.mu.m != target.b.m || s.mu.d != target.b.d)
    throw DimensionError("comm_weighted_cauchy: size mismatch");
  const CommSeries one_minus_b = CommSeries::identity(target.b.d, target.b.m, target.b.N) - target.b;
  Mat img = comm_mult_matrix(one_minus_b) * s.gram * s.factor.coords_pinv();
  for (int i = 0; i < img.rows(); ++i) img.row(i) /= target.sqrt_weight(i);
  WeightedCauchy w;
  w.W = target.to_coords * img;
  w.leak = max_abs(img - target.P_H * img) / std::max(1.0, max_abs(img));
  if (w.leak > 1e-8) w.warning = "truncation leak: weighted Cauchy image leaves ran D_b";
  return w;
}

CH2Report c_h2(const FreeSeries& B, const CommSeries& b, Side side) {
  const int N = std::min(B.N, b.N);
  const FreeSeries Bn = B.truncated(N);
  const CommSeries bn = b.truncated(N);
  if (!check_free_lift(Bn, bn).pass) throw DegenerateError("c_h2: B is not a free lift of b");
  const DbrSpace s = dbr_space(side == Side::Right ? transpose_series(Bn) : Bn, side);
  const CommDbrSpace cb = comm_dbr_space(bn);
  const TruncatedFock fock(B.d, B.m, N);
  Mat E = symmetrizer(fock).basis;
  for (int c = 0; c < E.cols(); ++c) E.col(c) /= cb.sqrt_weight(c);

  CH2Report r;
  const Mat In = s.to_coords * s.D * E;
  const Mat Out = cb.factor.coords();
  r.C = Out * pinv(In, 1e-10);
  r.coisometry_defect = op_norm(r.C * r.C.adjoint() - Mat::Identity(r.C.rows(), r.C.rows()));
  r.projection_error = max_abs(r.C - cb.to_coords * E.adjoint() * s.from_coords);
  r.compression_error = max_abs(E.adjoint() * s.D * E - cb.D);
  return r;
}

double freeabel_factorization_error(const FreeSeries& B, const CommSeries& b) {
  const int N = std::min(B.N, b.N);
  const FreeSeries Bn = B.truncated(N);
  const CommSeries bn = b.truncated(N);
  const CH2Report ch = c_h2(Bn, bn, Side::Right);
  const MomentFunctional phi = moments_from_schur(Bn);
  const GnsSpace g = build_gns(phi);
  const DbrSpace sR = dbr_space(transpose_series(Bn), Side::Right);
  const Mat FR = weighted_cauchy(g, sR).W;
  const CommHerglotzSpace hs = build_herglotz_space(comm_moments(bn));
  const Mat Fb = comm_weighted_cauchy(hs, comm_dbr_space(bn)).W;
  const Mat J = g.coords * symmetric_raw_vectors(*phi.words, phi.m) * hs.factor.coords_pinv();
  return max_abs(Fb - ch.C * FR * J);
}

CommGleason comm_gleason(const CommHerglotzSpace& s, const RowContractionExt& D, const CommDbrSpace& target) {
  const int d = s.mu.d, m = s.mu.m;
  const MultiTable& t = *s.mu.multis;
  const CommSeries& b = target.b;
  const Mat b0 = b[0];
  const Mat K0 = s.K(0);
  const Mat Wm = comm_mult_matrix(CommSeries::identity(d, m, b.N) - b);
  CommGleason out;

  Mat contr = -(Mat::Identity(m, m) - b0.adjoint() * b0);
  for (int j = 1; j <= d; ++j) {
    const Mat coeffs = Wm * series_of(s, D.D(j).adjoint() * K0 * (Mat::Identity(m, m) - b0));
    CommSeries f(d, m, b.N);
    for (int k = 0; k < t.size(); ++k) f[k] = coeffs.middleRows(k * m, m);
    const Mat bc = target.from_series(coeffs);
    contr += bc.adjoint() * bc;
    out.b_sol.push_back(bc);
    out.b_series.push_back(std::move(f));
  }
  out.b_contractivity = max_eig(contr);

  for (int n = 1; n < t.size(); ++n) {
    Mat acc = -(b[n]);
    for (int j = 1; j <= d; ++j) {
      const int p = t.minus(n, j);
      if (p >= 0) acc += out.b_series[j - 1][p];
    }
    out.gleason_residual = std::max(out.gleason_residual, max_abs(acc));
  }

  // Kernel coefficient columns k_n e_i of H(b) in ON coordinates.
  Mat Kc = target.to_coords * target.D;
  for (int c = 0; c < Kc.cols(); ++c) Kc.col(c) *= target.sqrt_weight(c);
  const Mat Kp = pinv(Kc, 1e-10);
  const Mat E = target.eval_empty();
  Mat rowsum = -(Mat::Identity(target.rank(), target.rank()) - E.adjoint() * E);
  for (int j = 1; j <= d; ++j) {
    Mat Y = Mat::Zero(target.rank(), Kc.cols());
    for (int n = 0; n < t.size(); ++n) {
      const int p = t.minus(n, j);
      if (p >= 0) Y.middleCols(n * m, m) = Kc.middleCols(p * m, m);
      Y.middleCols(n * m, m) -= out.b_sol[j - 1] * b[n].adjoint();
    }
    const Mat Xa = Y * Kp;
    out.X_consistency = std::max(out.X_consistency, max_abs(Xa * Kc - Y));
    rowsum += Xa.adjoint() * Xa;
    out.X_adj.push_back(Xa);
  }
  out.X_contractivity = max_eig(rowsum);
  return out;
}

}  // namespace freeclark
