#include "freeclark/kernels.hpp"

#include <algorithm>

#include "freeclark/linalg.hpp"

namespace freeclark {

namespace {

// Splits of w into (head, tail) as word indices, for every cut position.
std::vector<std::pair<int, int>> splits(const WordTable& t, int w) {
  const Word& s = t.word(w);
  std::vector<std::pair<int, int>> out;
  out.reserve(s.size() + 1);
  for (std::size_t k = 0; k <= s.size(); ++k) out.emplace_back(t.index(s.substr(0, k)), t.index(s.substr(k)));
  return out;
}

}  // namespace

CoeffKernel::CoeffKernel(int d_, int m_, int N_) : d(d_), m(m_), N(N_), words(word_table(d_, N_)) {
  G = Mat::Zero(words->size() * m, words->size() * m);
}

Mat CoeffKernel::entry(const Word& a, const Word& b) const {
  const int i = words->index(a), k = words->index(b);
  if (i < 0 || k < 0) throw ConfigError("kernel entry outside the truncation");
  return entry(i, k);
}

CoeffKernel szego_kernel(int d, int m, int N) {
  CoeffKernel K(d, m, N);
  K.G.setIdentity();
  return K;
}

CoeffKernel dbr_kernel(const FreeSeries& B, Side side) {
  CoeffKernel K = szego_kernel(B.d, B.m, B.N);
  if (B.l1_norm() > 1.0 + 1e-12) {
    const double lower = op_norm(mult_matrix(B, side));
    if (lower > 1.0 + 1e-12) K.warning = "B is not contractive on the truncated Fock space";
    else K.warning = "B is not certified contractive (l1 bound above 1)";
  }
  const WordTable& t = *B.words;
  for (int a = 0; a < t.size(); ++a) {
    const auto sa = splits(t, a);
    for (int b = 0; b < t.size(); ++b) {
      const auto sb = splits(t, b);
      Mat acc = Mat::Zero(B.m, B.m);
      if (side == Side::Right) {
        // a = g u, b = g v: common prefixes g.
        const std::size_t lim = std::min(sa.size(), sb.size());
        for (std::size_t k = 0; k < lim; ++k) {
          if (sa[k].first != sb[k].first) break;
          acc += B[sa[k].second] * B[sb[k].second].adjoint();
        }
      } else {
        // a = u g, b = v g: common suffixes g.
        const std::size_t la = sa.size() - 1, lb = sb.size() - 1;
        for (std::size_t k = 0; k <= std::min(la, lb); ++k) {
          const auto& pa = sa[la - k];
          const auto& pb = sb[lb - k];
          if (pa.second != pb.second) break;
          acc += B[pa.first] * B[pb.first].adjoint();
        }
      }
      K.set(a, b, K.entry(a, b) - acc);
    }
  }
  return K;
}

CoeffKernel herglotz_kernel_from_moments(const MomentFunctional& phi, Side side) {
  CoeffKernel K(phi.d, phi.m, phi.N);
  const WordTable& t = *phi.words;
  for (int a = 0; a < t.size(); ++a) {
    for (int b = 0; b < t.size(); ++b) {
      const Cancellation c = side == Side::Right ? cancel(t.word(a), t.word(b))
                                                  : cancel(transpose(t.word(a)), transpose(t.word(b)));
      K.set(a, b, resolve(c, phi));
    }
  }
  return K;
}

CoeffKernel herglotz_kernel_from_H(const FreeSeries& H, Side side) {
  CoeffKernel K(H.d, H.m, H.N);
  const WordTable& t = *H.words;
  const Mat zero = Mat::Zero(H.m, H.m);
  for (int a = 0; a < t.size(); ++a) {
    const Word& wa = t.word(a);
    for (int b = 0; b < t.size(); ++b) {
      const Word& wb = t.word(b);
      Mat first = zero, second = zero;
      if (side == Side::Left) {
        // g b = a and g a = b: b (resp. a) is a suffix.
        if (wb.size() <= wa.size() && wa.compare(wa.size() - wb.size(), wb.size(), wb) == 0)
          first += H.coeff(wa.substr(0, wa.size() - wb.size()));
        if (wa.size() <= wb.size() && wb.compare(wb.size() - wa.size(), wa.size(), wa) == 0)
          second += H.coeff(wb.substr(0, wb.size() - wa.size())).adjoint();
      } else {
        // b g = a and a g = b: prefixes.
        if (wb.size() <= wa.size() && wa.compare(0, wb.size(), wb) == 0) first += H.coeff(wa.substr(wb.size()));
        if (wa.size() <= wb.size() && wb.compare(0, wa.size(), wa) == 0)
          second += H.coeff(wb.substr(wa.size())).adjoint();
      }
      K.set(a, b, 0.5 * (first + second));
    }
  }
  return K;
}

CoeffKernel kernel_conjugate(const CoeffKernel& K, const FreeSeries& M, Side side) {
  if (K.d != M.d || K.m != M.m || K.N != M.N) throw DimensionError("kernel_conjugate: size mismatch");
  CoeffKernel R(K.d, K.m, K.N);
  const WordTable& t = *K.words;
  for (int a = 0; a < t.size(); ++a) {
    const auto sa = splits(t, a);
    for (int b = 0; b < t.size(); ++b) {
      const auto sb = splits(t, b);
      Mat acc = Mat::Zero(K.m, K.m);
      for (const auto& [ha, ta] : sa) {
        // Left: a = u x, so u = head, x = tail.  Right: a = x u.
        const int u = side == Side::Left ? ha : ta;
        const int x = side == Side::Left ? ta : ha;
        if (max_abs(M[u]) == 0.0) continue;
        for (const auto& [hb, tb] : sb) {
          const int v = side == Side::Left ? hb : tb;
          const int y = side == Side::Left ? tb : hb;
          if (max_abs(M[v]) == 0.0) continue;
          acc += M[u] * K.entry(x, y) * M[v].adjoint();
        }
      }
      R.set(a, b, acc);
    }
  }
  return R;
}

PsdReport psd_check(const Mat& G, double tol) {
  if (!is_hermitian(G, 1e-12)) throw Error("psd_check: matrix is not Hermitian to 1e-12");
  PsdReport r;
  r.tolerance = tol;
  if (G.size() == 0) {
    r.pass = true;
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (G + G.adjoint()), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  r.min_eig = ev(0);
  r.norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  r.pass = r.min_eig >= -tol * std::max(1.0, r.norm);
  return r;
}

}  // namespace freeclark
