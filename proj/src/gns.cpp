#include "freeclark/gns.hpp"

#include <algorithm>

#include "freeclark/kernels.hpp"

namespace freeclark {

Mat gns_gram(const MomentFunctional& phi) { return herglotz_kernel_from_moments(phi, Side::Right).G; }

Mat symmetric_raw_vectors(const WordTable& words, int m) {
  const auto multis = multi_table(words.d(), words.N());
  const std::vector<int> fib = fiber_map(words, *multis);
  Mat S = Mat::Zero(words.size() * m, multis->size() * m);
  for (int a = 0; a < words.size(); ++a)
    for (int i = 0; i < m; ++i) S(a * m + i, fib[a] * m + i) = 1.0;
  return S;
}

GnsSpace build_gns(const MomentFunctional& phi, const GnsOptions& opts) {
  GnsSpace g;
  g.phi = phi;
  g.gram = gns_gram(phi);
  g.factor = psd_factor(g.gram, opts.rank_tol);
  if (g.factor.min_eig < -opts.psd_tol * std::max(1.0, g.factor.lambda_max))
    throw NotPositiveError("moment functional is not completely positive at level N (GNS Gram has eigenvalue " +
                           std::to_string(g.factor.min_eig) + ")");
  g.coords = g.factor.coords();
  const int m = phi.m;
  const WordTable& w = *phi.words;
  g.embed = g.coords.leftCols(m);

  const int ns = phi.N >= 1 ? w.degree_start(phi.N) * m : 0;
  if (ns == 0) {
    g.safe_basis = Mat(g.rank(), 0);
    g.safe_rep = Mat(0, 0);
    g.piL.assign(phi.d, Mat(g.rank(), 0));
    return g;
  }
  const PsdFactor fs = psd_factor(g.gram.topLeftCorner(ns, ns), opts.rank_tol);
  g.safe_rep = fs.coords_pinv();
  g.safe_basis = g.coords.leftCols(ns) * g.safe_rep;

  g.piL.reserve(phi.d);
  for (int j = 1; j <= phi.d; ++j) {
    Mat shifted = Mat::Zero(g.raw_dim(), g.safe_rank());
    for (int a = 0; a < ns / m; ++a) {
      const int b = w.extend(a, j, Side::Left);
      shifted.middleRows(b * m, m) = g.safe_rep.middleRows(a * m, m);
    }
    g.piL.push_back(g.coords * shifted);
  }
  return g;
}

double stinespring_check(const GnsSpace& g) {
  const MomentFunctional& phi = g.phi;
  const WordTable& w = *phi.words;
  double err = op_norm(phi.phi_I - g.embed.adjoint() * g.embed);
  if (phi.N < 1) return err;
  // images[a] = pi(L)^a [I (x)], built from the last letter outward.
  std::vector<Mat> images(w.degree_start(phi.N));
  images[0] = g.embed;
  for (int a = 1; a < static_cast<int>(images.size()); ++a) {
    const Word& word = w.word(a);
    const int tail = w.index(word.substr(1));
    const Mat inSafe = g.safe_basis.adjoint() * images[tail];
    images[a] = g.piL[letter_of(word[0]) - 1] * inSafe;
    err = std::max(err, op_norm(phi[a] - g.embed.adjoint() * images[a]));
  }
  return err;
}

RowIsometryDefect row_isometry_defect(const GnsSpace& g) {
  RowIsometryDefect r;
  const int rs = g.safe_rank();
  if (rs == 0) return r;
  Mat sum = Mat::Zero(g.rank(), g.rank());
  for (int i = 0; i < g.phi.d; ++i) {
    for (int j = 0; j < g.phi.d; ++j) {
      Mat p = g.piL[i].adjoint() * g.piL[j];
      if (i == j) p -= Mat::Identity(rs, rs);
      r.isometry_defect = std::max(r.isometry_defect, op_norm(p));
    }
    sum += g.piL[i] * g.piL[i].adjoint();
  }
  const Mat defect = g.safe_basis.adjoint() * (Mat::Identity(g.rank(), g.rank()) - sum) * g.safe_basis;
  r.cuntz_defect = op_norm(defect);
  return r;
}

double quasi_extreme_indicator(const GnsSpace& g) {
  const int m = g.phi.m;
  const Mat S = symmetric_raw_vectors(*g.phi.words, m);
  const Mat Y0 = g.embed;
  if (S.cols() <= m) return op_norm(Y0.adjoint() * Y0);
  const Mat Ys = g.coords * S.rightCols(S.cols() - m);
  const PsdFactor f = psd_factor(Ys.adjoint() * Ys, 1e-10);
  const Mat Q = Ys * f.coords_pinv();
  const Mat R = Y0 - Q * (Q.adjoint() * Y0);
  return std::max(0.0, op_norm(R.adjoint() * R));
}

double quasi_extreme_indicator(const MomentFunctional& phi, const GnsOptions& opts) {
  return quasi_extreme_indicator(build_gns(phi, opts));
}

}  // namespace freeclark
