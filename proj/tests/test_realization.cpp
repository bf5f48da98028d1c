#include <doctest.h>

#include "test_util.hpp"

using namespace freeclark;
using namespace testutil;

namespace {

FreeSeries z1(int N) { return scalar_series(1, N, {{"1", 1.0}}); }

NCPoint jordan_point(double s) {
  NCPoint p;
  p.n = 2;
  Mat J = Mat::Zero(2, 2);
  J(0, 1) = s;
  p.Z = {J};
  p.nilpotent_order = 2;
  return p;
}

struct CommSetup {
  CommSeries b;
  CommHerglotzSpace hs;
  VbReport vb;
  CommDbrSpace cb;
};

CommSetup comm_setup(const CommSeries& b) {
  CommSetup s{b, build_herglotz_space(comm_moments(b)), {}, comm_dbr_space(b)};
  s.vb = build_Vb(s.hs);
  return s;
}

}  // namespace

TEST_CASE("free colligation of B = 0") {
  const FreeSeries zero(2, 1, 3);
  const Colligation c = free_colligation(zero, Side::Right);
  const DbrSpace sp = dbr_space(zero, Side::Right);
  const TruncatedFock f(2, 1, 3);
  for (int j = 1; j <= 2; ++j) {
    CHECK(max_abs(sp.from_coords * c.A[j - 1] * sp.to_coords - dense(creation_matrix(f, Side::Left, j)).adjoint()) < 1e-12);
    CHECK(max_abs(c.Bblk[j - 1]) < 1e-15);
  }
  Mat vac = Mat::Zero(1, f.dim());
  vac(0, 0) = 1.0;
  CHECK(max_abs(c.C * sp.to_coords - vac) < 1e-12);
  CHECK(max_abs(c.D) == 0.0);
}

TEST_CASE("free colligation of B = z") {
  const Colligation c = free_colligation(z1(4), Side::Right);
  CHECK(c.state_dim() == 1);
  CHECK(std::abs(c.A[0](0, 0)) < 1e-14);
  CHECK(std::abs(std::abs(c.C(0, 0)) - 1.0) < 1e-14);
  CHECK(std::abs(c.C(0, 0) * c.Bblk[0](0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(c.D(0, 0)) == 0.0);
  const Mat v = transfer_eval(c, jordan_point(0.9));
  CHECK(max_abs(v - jordan_point(0.9).Z[0]) < 1e-14);
  const FreeSeries t = transfer_coeffs(c, 3);
  CHECK(series_err(t, z1(3)) < 1e-14);
}

TEST_CASE("transfer functions of random free colligations") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const int N = 6;
    const FreeSeries B = random_free_schur(2, 1 + static_cast<int>(seed % 2), 2, 0.9, seed, N);
    for (Side s : {Side::Right, Side::Left}) {
      const Colligation c = free_colligation(s == Side::Right ? B : transpose_series(B), s);
      // The left colligation realizes the right series and vice versa.
      const FreeSeries target = s == Side::Right ? B : transpose_series(B);
      CHECK(series_err(transfer_coeffs(c, N - 1), target) < 1e-10);
      CHECK(max_abs(transfer_coeffs(c, 0)[0] - target[0]) < 1e-14);
      if (s == Side::Right) {
        const ColligationDefects df = colligation_defects(c);
        CHECK(df.coisometry_safe < 1e-7);
        CHECK(df.contraction < 1e-7);
        for (std::uint64_t k = 0; k < 3; ++k) {
          const NCPoint p = random_nilpotent_point(2, 4, 100 * seed + k);
          CHECK(max_abs(transfer_eval(c, p) - eval_nc(B, p)) < 1e-10);
        }
        NCPoint zero;
        zero.n = 3;
        zero.Z = {Mat::Zero(3, 3), Mat::Zero(3, 3)};
        CHECK(max_abs(transfer_eval(c, zero) - kron(Mat::Identity(3, 3), B[0])) < 1e-14);
      }
    }
  }
}

TEST_CASE("transfer_eval at a non-nilpotent point") {
  // Inside the ball the resolvent solve agrees with the polynomial value up
  // to the truncation tail, which is zero for a polynomial with lookahead.
  const FreeSeries B = random_free_schur(2, 1, 1, 0.9, 4, 4);
  const Colligation c = free_colligation(B, Side::Right, 4);
  NCPoint p = random_nilpotent_point(2, 3, 9, 0.5);
  p.nilpotent_order = 0;
  CHECK(max_abs(transfer_eval(c, p) - eval_nc(B, p)) < 1e-10);
}

TEST_CASE("observability proxy") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const int N = 4;
    const Colligation c = free_colligation(random_free_schur(2, 1, 2, 0.9, seed, N), Side::Right);
    CHECK(observability_rank(c, N) == c.state_dim());
  }
}

TEST_CASE("commutative colligations") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const int N = 3;
    const CommSetup s = comm_setup(random_comm_schur(2, 1 + static_cast<int>(seed % 2), 2, 0.8, seed, N));
    for (const RowContractionExt& D : {s.vb.V, random_extension(s.vb, seed + 40, 0.5)}) {
      const FreeSeries lift = lift_from_extension(s.hs, D, N + 1).first;
      const Colligation cf = free_colligation(lift, Side::Right, N);
      const CH2Report ch = c_h2(lift.truncated(N), s.b, Side::Right);
      const Colligation viaFree = comm_colligation_from_free(cf, ch.C);
      const Colligation viaD = comm_colligation_from_D(s.hs, D, s.cb);
      CHECK(colligation_distance(viaFree, viaD) < 1e-8);
      CHECK(max_abs(viaD.D - s.b[0]) == 0.0);
      CHECK(max_abs(viaD.C - s.cb.eval_empty()) < 1e-12);
      CHECK(colligation_defects(viaD).contraction < 1e-7);
      CHECK(series_err(symmetrize_series(transfer_coeffs(viaD, N - 1)), s.b) < 1e-9);

      std::vector<cplx> z0(2, cplx(0.0));
      CHECK(max_abs(comm_transfer_eval(viaD, z0) - s.b[0]) < 1e-14);
      std::vector<cplx> z = {cplx(0.2, 0.1), cplx(-0.1, 0.17)};
      const double r = std::sqrt(std::norm(z[0]) + std::norm(z[1]));
      const double tail = max_abs(comm_transfer_eval(viaD, z) - comm_eval(s.b.truncated(N - 1), z));
      CHECK(tail <= comm_tail_bound(r, N - 1));
    }
  }
}

TEST_CASE("one-variable commutative colligation") {
  const CommSetup s = comm_setup(scalar_comm(1, 4, {{{1}, 1.0}}));
  const Colligation c = comm_colligation_from_D(s.hs, s.vb.V, s.cb);
  CHECK(c.state_dim() == 1);
  CHECK(std::abs(comm_transfer_eval(c, {cplx(0.5)})(0, 0) - 0.5) < 1e-14);
}

TEST_CASE("quasi-extreme b gives an isometric tight colligation") {
  for (int N = 2; N <= 5; ++N) {
    const CommSetup s = comm_setup(scalar_comm(2, N, {{{1, 0}, 1.0}}));
    CHECK(comm_quasi_extreme_indicator(s.hs) < 1e-12);
    const Colligation c = comm_colligation_from_D(s.hs, s.vb.V, s.cb);
    CHECK(colligation_defects(c).isometry < 1e-7);
  }
  // A non quasi-extreme b is not isometric.
  const CommSetup n = comm_setup(scalar_comm(2, 3, {{{1, 0}, 0.5}, {{0, 1}, 0.5}}));
  CHECK(colligation_defects(comm_colligation_from_D(n.hs, n.vb.V, n.cb)).isometry > 1e-3);
}

TEST_CASE("tail bound") {
  CHECK(comm_tail_bound(0.5, 2) == doctest::Approx(0.125 / 0.5));
  CHECK(comm_tail_bound(0.0, 3) == 0.0);
}
