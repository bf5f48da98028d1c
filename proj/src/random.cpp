#include "freeclark/random.hpp"

#include <random>

#include "freeclark/linalg.hpp"

namespace freeclark {

namespace {

Mat gaussian(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat A(r, c);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < c; ++k) A(i, k) = cplx(nd(rng), nd(rng));
  return A;
}

void check_generator(int d, int m, int deg, double rho, int N) {
  check_alphabet(d, N);
  if (m < 1) throw ConfigError("m must be at least 1");
  if (deg < 0 || deg > N) throw ConfigError("deg must lie in [0, N]");
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("rho must lie in (0, 1)");
}

}  // namespace

Mat random_gaussian(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return gaussian(rng, rows, cols);
}

FreeSeries random_free_schur(int d, int m, int deg, double rho, std::uint64_t seed, int N) {
  check_generator(d, m, deg, rho, N);
  std::mt19937_64 rng(seed);
  FreeSeries F(d, m, N);
  for (int a = 0; a < F.size() && F.words->length(a) <= deg; ++a) F[a] = gaussian(rng, m, m);
  const double l1 = F.l1_norm();
  return F * cplx(rho / l1, 0.0);
}

CommSeries random_comm_schur(int d, int m, int deg, double rho, std::uint64_t seed, int N) {
  check_generator(d, m, deg, rho, N);
  std::mt19937_64 rng(seed);
  CommSeries f(d, m, N);
  for (int a = 0; a < f.size() && f.multis->degree(a) <= deg; ++a) f[a] = gaussian(rng, m, m);
  const double l1 = f.l1_norm();
  return f * cplx(rho / l1, 0.0);
}

NCPoint random_nilpotent_point(int d, int n, std::uint64_t seed, double row_norm) {
  if (d < 1 || n < 1) throw ConfigError("random_nilpotent_point: d and n must be positive");
  std::mt19937_64 rng(seed);
  Mat S = gaussian(rng, n, n) + 2.0 * Mat::Identity(n, n);
  const Mat Sinv = S.inverse();
  NCPoint p;
  p.n = n;
  p.nilpotent_order = n;
  for (int j = 0; j < d; ++j) {
    Mat T = gaussian(rng, n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k <= i; ++k) T(i, k) = 0.0;
    p.Z.push_back(S * T * Sinv);
  }
  const double r = p.row_norm();
  if (r > 0.0)
    for (Mat& Z : p.Z) Z *= row_norm / r;
  return p;
}

Mat random_unitary(int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Mat G = gaussian(rng, m, m);
  Eigen::HouseholderQR<Mat> qr(G);
  Mat Q = qr.householderQ() * Mat::Identity(m, m);
  const Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < m; ++i) {
    const cplx ph = R(i, i) == 0.0 ? cplx(1.0) : R(i, i) / std::abs(R(i, i));
    Q.col(i) *= ph;
  }
  return Q;
}

}  // namespace freeclark
