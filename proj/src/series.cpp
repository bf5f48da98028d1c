#include "freeclark/series.hpp"

#include <cmath>

#include "freeclark/linalg.hpp"

namespace freeclark {

namespace {

void require_same(const FreeSeries& F, const FreeSeries& G) {
  if (F.d != G.d || F.m != G.m || F.N != G.N) throw DimensionError("free series with different d, m or N");
}

void require_same(const CommSeries& f, const CommSeries& g) {
  if (f.d != g.d || f.m != g.m || f.N != g.N) throw DimensionError("commutative series with different d, m or N");
}

Mat invert_constant(const Mat& c) {
  Eigen::JacobiSVD<Mat> svd(c);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) <= 0.0 || s(0) / s(s.size() - 1) > kMaxCondition)
    throw NonUnitalError("constant term is singular (condition number above 1e12)");
  return c.inverse();
}

}  // namespace

FreeSeries::FreeSeries(int d_, int m_, int N_) : d(d_), m(m_), N(N_), words(word_table(d_, N_)) {
  if (m < 1) throw ConfigError("coefficient dimension must be positive");
  coeffs.assign(words->size(), Mat::Zero(m, m));
}

FreeSeries FreeSeries::constant(const Mat& c, int d, int N) {
  if (c.rows() != c.cols()) throw DimensionError("constant coefficient must be square");
  FreeSeries F(d, static_cast<int>(c.rows()), N);
  F.coeffs[0] = c;
  return F;
}

Mat FreeSeries::coeff(const Word& w) const {
  const int i = words->index(w);
  return i < 0 ? Mat::Zero(m, m) : coeffs[i];
}

Mat& FreeSeries::at(const Word& w) {
  check_word(w, d);
  const int i = words->index(w);
  if (i < 0) throw ConfigError("word '" + w + "' exceeds the truncation degree");
  return coeffs[i];
}

int FreeSeries::degree(double tol) const {
  for (int i = size() - 1; i >= 0; --i)
    if (max_abs(coeffs[i]) > tol) return words->length(i);
  return -1;
}

FreeSeries FreeSeries::truncated(int N2) const {
  FreeSeries G(d, m, N2);
  const int n = std::min(size(), G.size());
  for (int i = 0; i < n; ++i) G.coeffs[i] = coeffs[i];
  return G;
}

double FreeSeries::l1_norm() const {
  double s = 0.0;
  for (const Mat& c : coeffs)
    if (max_abs(c) > 0.0) s += op_norm(c);
  return s;
}

FreeSeries FreeSeries::operator+(const FreeSeries& o) const {
  require_same(*this, o);
  FreeSeries r = *this;
  for (int i = 0; i < size(); ++i) r.coeffs[i] += o.coeffs[i];
  return r;
}

FreeSeries FreeSeries::operator-(const FreeSeries& o) const {
  require_same(*this, o);
  FreeSeries r = *this;
  for (int i = 0; i < size(); ++i) r.coeffs[i] -= o.coeffs[i];
  return r;
}

FreeSeries FreeSeries::operator*(cplx s) const {
  FreeSeries r = *this;
  for (Mat& c : r.coeffs) c *= s;
  return r;
}

FreeSeries FreeSeries::times_constant(const Mat& U) const {
  if (U.rows() != m || U.cols() != m) throw DimensionError("times_constant: size mismatch");
  FreeSeries r = *this;
  for (Mat& c : r.coeffs) c = c * U;
  return r;
}

CommSeries::CommSeries(int d_, int m_, int N_) : d(d_), m(m_), N(N_), multis(multi_table(d_, N_)) {
  if (m < 1) throw ConfigError("coefficient dimension must be positive");
  coeffs.assign(multis->size(), Mat::Zero(m, m));
}

CommSeries CommSeries::constant(const Mat& c, int d, int N) {
  if (c.rows() != c.cols()) throw DimensionError("constant coefficient must be square");
  CommSeries f(d, static_cast<int>(c.rows()), N);
  f.coeffs[0] = c;
  return f;
}

Mat CommSeries::coeff(const MultiIndex& n) const {
  const int i = multis->index(n);
  return i < 0 ? Mat::Zero(m, m) : coeffs[i];
}

Mat& CommSeries::at(const MultiIndex& n) {
  const int i = multis->index(n);
  if (i < 0) throw ConfigError("multi-index " + multi_key(n) + " outside the truncation");
  return coeffs[i];
}

int CommSeries::degree(double tol) const {
  for (int i = size() - 1; i >= 0; --i)
    if (max_abs(coeffs[i]) > tol) return multis->degree(i);
  return -1;
}

CommSeries CommSeries::truncated(int N2) const {
  CommSeries g(d, m, N2);
  const int n = std::min(size(), g.size());
  for (int i = 0; i < n; ++i) g.coeffs[i] = coeffs[i];
  return g;
}

double CommSeries::l1_norm() const {
  double s = 0.0;
  for (const Mat& c : coeffs)
    if (max_abs(c) > 0.0) s += op_norm(c);
  return s;
}

CommSeries CommSeries::operator+(const CommSeries& o) const {
  require_same(*this, o);
  CommSeries r = *this;
  for (int i = 0; i < size(); ++i) r.coeffs[i] += o.coeffs[i];
  return r;
}

CommSeries CommSeries::operator-(const CommSeries& o) const {
  require_same(*this, o);
  CommSeries r = *this;
  for (int i = 0; i < size(); ++i) r.coeffs[i] -= o.coeffs[i];
  return r;
}

CommSeries CommSeries::operator*(cplx s) const {
  CommSeries r = *this;
  for (Mat& c : r.coeffs) c *= s;
  return r;
}

double NCPoint::row_norm() const {
  if (Z.empty()) return 0.0;
  Mat row(n, n * d());
  for (int j = 0; j < d(); ++j) row.block(0, j * n, n, n) = Z[j];
  return op_norm(row);
}

Mat mult_matrix(const FreeSeries& F, Side side, const TruncatedFock& fock) {
  if (F.d != fock.d() || F.m != fock.m()) throw DimensionError("mult_matrix: series and Fock space differ in d or m");
  const FreeSeries G = F.N == fock.N() ? F : F.truncated(fock.N());
  const WordTable& w = fock.words();
  const int m = fock.m();
  Mat M = Mat::Zero(fock.dim(), fock.dim());
  for (int b = 0; b < w.size(); ++b) {
    for (int mu = 0; mu < w.size(); ++mu) {
      if (w.length(mu) + w.length(b) > w.N()) break;
      if (max_abs(G[mu]) == 0.0) continue;
      const int target = side == Side::Left ? w.concat(mu, b) : w.concat(b, mu);
      M.block(target * m, b * m, m, m) = G[mu];
    }
  }
  return M;
}

FreeSeries series_multiply(const FreeSeries& F, const FreeSeries& G, Side side) {
  require_same(F, G);
  const WordTable& w = *F.words;
  FreeSeries R(F.d, F.m, F.N);
  for (int a = 0; a < w.size(); ++a) {
    if (max_abs(F[a]) == 0.0) continue;
    for (int b = 0; b < w.size(); ++b) {
      if (w.length(a) + w.length(b) > w.N()) break;
      const int c = side == Side::Left ? w.concat(a, b) : w.concat(b, a);
      R.coeffs[c] += F[a] * G[b];
    }
  }
  return R;
}

FreeSeries invert_series(const FreeSeries& F) {
  const WordTable& w = *F.words;
  const Mat inv0 = invert_constant(F[0]);
  FreeSeries G(F.d, F.m, F.N);
  G.coeffs[0] = inv0;
  for (int c = 1; c < w.size(); ++c) {
    const Word& gamma = w.word(c);
    Mat acc = Mat::Zero(F.m, F.m);
    for (std::size_t k = 1; k <= gamma.size(); ++k) {
      const int a = w.index(gamma.substr(0, k));
      const int b = w.index(gamma.substr(k));
      acc += F[a] * G[b];
    }
    G.coeffs[c] = -inv0 * acc;
  }
  return G;
}

FreeSeries transpose_series(const FreeSeries& F) {
  FreeSeries R(F.d, F.m, F.N);
  for (int a = 0; a < F.size(); ++a) R.coeffs[F.words->transpose_index(a)] = F[a];
  return R;
}

Mat eval_nc(const FreeSeries& F, const NCPoint& p) {
  if (p.d() != F.d) throw DimensionError("eval_nc: point has the wrong number of variables");
  for (const Mat& Z : p.Z)
    if (Z.rows() != p.n || Z.cols() != p.n) throw DimensionError("eval_nc: point matrices must be n x n");
  const WordTable& w = *F.words;
  std::vector<Mat> powers(w.size());
  powers[0] = Mat::Identity(p.n, p.n);
  Mat out = Mat::Zero(p.n * F.m, p.n * F.m);
  for (int a = 0; a < w.size(); ++a) {
    if (a > 0) {
      const Word& word = w.word(a);
      powers[a] = p.Z[letter_of(word[0]) - 1] * powers[w.index(word.substr(1))];
    }
    if (max_abs(F[a]) > 0.0) out += kron(powers[a], F[a]);
  }
  return out;
}

CommSeries symmetrize_series(const FreeSeries& F) {
  CommSeries f(F.d, F.m, F.N);
  const std::vector<int> fib = fiber_map(*F.words, *f.multis);
  for (int a = 0; a < F.size(); ++a) f.coeffs[fib[a]] += F[a];
  return f;
}

NormBounds schur_norm_bounds(const FreeSeries& F, const TruncatedFock& fock) {
  NormBounds nb;
  nb.lower = op_norm(mult_matrix(F, Side::Left, fock));
  nb.upper = F.l1_norm();
  return nb;
}

CommSeries comm_multiply(const CommSeries& f, const CommSeries& g) {
  require_same(f, g);
  const MultiTable& t = *f.multis;
  CommSeries r(f.d, f.m, f.N);
  for (int p = 0; p < t.size(); ++p) {
    if (max_abs(f[p]) == 0.0) continue;
    for (int q = 0; q < t.size(); ++q) {
      if (t.degree(p) + t.degree(q) > t.N()) break;
      MultiIndex n = t.item(p);
      for (int k = 0; k < f.d; ++k) n[k] += t.item(q)[k];
      r.coeffs[t.index(n)] += f[p] * g[q];
    }
  }
  return r;
}

CommSeries comm_invert(const CommSeries& f) {
  const MultiTable& t = *f.multis;
  const Mat inv0 = invert_constant(f[0]);
  CommSeries g(f.d, f.m, f.N);
  g.coeffs[0] = inv0;
  for (int n = 1; n < t.size(); ++n) {
    Mat acc = Mat::Zero(f.m, f.m);
    for (int p = 1; p < t.size() && t.degree(p) <= t.degree(n); ++p) {
      MultiIndex q = t.item(n);
      bool ok = true;
      for (int k = 0; k < f.d; ++k) {
        q[k] -= t.item(p)[k];
        if (q[k] < 0) ok = false;
      }
      if (ok) acc += f[p] * g[t.index(q)];
    }
    g.coeffs[n] = -inv0 * acc;
  }
  return g;
}

Mat comm_eval(const CommSeries& f, const std::vector<cplx>& z) {
  if (static_cast<int>(z.size()) != f.d) throw DimensionError("comm_eval: point has the wrong dimension");
  Mat out = Mat::Zero(f.m, f.m);
  const MultiTable& t = *f.multis;
  for (int i = 0; i < t.size(); ++i) {
    cplx mono = 1.0;
    for (int k = 0; k < f.d; ++k)
      for (int e = 0; e < t.item(i)[k]; ++e) mono *= z[k];
    out += mono * f[i];
  }
  return out;
}

}  // namespace freeclark
