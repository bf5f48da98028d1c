#include <doctest.h>

#include "test_util.hpp"

using namespace freeclark;
using namespace testutil;

namespace {

MomentFunctional all_ones(int N) {
  MomentFunctional phi(1, 1, N);
  for (int i = 0; i < phi.words->size(); ++i) phi.set(i, scal(1.0));
  return phi;
}

// Independent oracle: Gram of the symmetric monomials L^n (fiber sums of raw
// words), then the largest eigenvalue of its Schur complement with respect to
// the n != 0 block, i.e. the squared distance of the constants to the higher
// symmetric monomials maximized over unit h.
double schur_complement_distance(const Mat& raw, int d, int N, int m) {
  const auto words = enumerate_words(d, N);
  std::map<MultiIndex, int> col;
  for (const Word& w : words) col.emplace(abelianize(w, d), 0);
  int k = 0;
  for (auto& [n, c] : col) c = k++;  // (0,..,0) sorts first
  Mat S = Mat::Zero(raw.rows(), k * m);
  for (std::size_t a = 0; a < words.size(); ++a)
    for (int i = 0; i < m; ++i) S(static_cast<int>(a) * m + i, col[abelianize(words[a], d)] * m + i) = 1.0;
  const Mat G = S.adjoint() * raw * S;
  const int r = static_cast<int>(G.rows()) - m;
  const Mat C = G.topLeftCorner(m, m) - G.topRightCorner(m, r) * pinv(G.bottomRightCorner(r, r), 1e-12) * G.bottomLeftCorner(r, m);
  return Eigen::SelfAdjointEigenSolver<Mat>(C).eigenvalues().maxCoeff();
}

}  // namespace

TEST_CASE("GNS of the delta functional is the truncated Fock space") {
  MomentFunctional delta(2, 2, 3);
  delta.set(0, Mat::Identity(2, 2));
  const GnsSpace g = build_gns(delta);
  CHECK(max_abs(g.gram - Mat::Identity(30, 30)) == 0.0);
  CHECK(g.rank() == 30);
  CHECK(stinespring_check(g) == 0.0);
  const RowIsometryDefect rd = row_isometry_defect(g);
  CHECK(rd.isometry_defect < 1e-14);
  CHECK(rd.cuntz_defect == doctest::Approx(1.0));
  CHECK(quasi_extreme_indicator(g) == doctest::Approx(1.0));
}

TEST_CASE("all-ones moments give a rank one space with a unitary shift") {
  const GnsSpace g = build_gns(all_ones(5));
  CHECK(max_abs(g.gram - Mat::Ones(6, 6)) == 0.0);
  CHECK(g.rank() == 1);
  REQUIRE(g.piL.size() == 1);
  REQUIRE(g.piL[0].rows() == 1);
  REQUIRE(g.piL[0].cols() == 1);
  CHECK(std::abs(g.piL[0](0, 0) - 1.0) < 1e-12);
  const RowIsometryDefect rd = row_isometry_defect(g);
  CHECK(rd.isometry_defect < 1e-12);
  CHECK(rd.cuntz_defect < 1e-12);
  CHECK(quasi_extreme_indicator(g) < 1e-12);
}

TEST_CASE("level zero") {
  MomentFunctional phi(2, 1, 0);
  phi.set(0, scal(2.5));
  const GnsSpace g = build_gns(phi);
  CHECK(g.gram.rows() == 1);
  CHECK(g.gram(0, 0) == cplx(2.5));
}

TEST_CASE("non-positive moment data are rejected") {
  MomentFunctional phi(1, 1, 2);
  phi.set(0, scal(1.0));
  phi.set(1, scal(2.0));  // |phi(L)| > phi(I)
  CHECK_THROWS_AS(build_gns(phi), NotPositiveError);
}

TEST_CASE("gram entries follow the cancellation rule") {
  const MomentFunctional phi = moments_from_schur(random_free_schur(2, 2, 2, 0.9, 3, 3));
  const Mat G = gns_gram(phi);
  const WordTable& t = *phi.words;
  for (int a = 0; a < t.size(); ++a)
    for (int b = 0; b < t.size(); ++b) CHECK(max_abs(G.block(2 * a, 2 * b, 2, 2) - resolve(cancel(t.word(a), t.word(b)), phi)) == 0.0);
}

TEST_CASE("Stinespring formula and row isometry on random instances") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const int d = 1 + static_cast<int>(seed % 3), m = 1 + static_cast<int>(seed % 2);
    const MomentFunctional phi = moments_from_schur(random_free_schur(d, m, 2, 0.9, seed, d == 3 ? 3 : 4));
    const GnsSpace g = build_gns(phi);
    CHECK(psd_check(g.gram).pass);
    CHECK(stinespring_check(g) < 1e-8);
    CHECK(row_isometry_defect(g).isometry_defect < 1e-8);
    CHECK(op_norm(g.embed) * op_norm(g.embed) == doctest::Approx(op_norm(phi.phi_I)).epsilon(1e-12));
  }
}

TEST_CASE("pi(L_j) acts by concatenation") {
  const MomentFunctional phi = moments_from_schur(random_free_schur(2, 2, 2, 0.9, 8, 3));
  const GnsSpace g = build_gns(phi);
  const WordTable& t = *phi.words;
  const int m = 2;
  for (int a = 0; a < t.degree_start(3); ++a)
    for (int j = 1; j <= 2; ++j)
      for (int i = 0; i < m; ++i) {
        const Vec x = g.coords.col(a * m + i);
        const Vec y = g.coords.col(t.concat(t.index(Word(1, letter_char(j))), a) * m + i);
        CHECK((g.piL[j - 1] * (g.safe_basis.adjoint() * x) - y).norm() < 1e-10);
      }
}

TEST_CASE("quasi-extreme indicator") {
  SUBCASE("constant b") {
    for (cplx c : {cplx(0.5), cplx(0.2, 0.6), cplx(-0.7)}) {
      const MomentFunctional phi = moments_from_schur(FreeSeries::constant(scal(c), 1, 4));
      // Oracle: the measure is Re H(0) times Lebesgue measure.
      const double expect = (1.0 - std::norm(c)) / std::norm(1.0 - c);
      CHECK(quasi_extreme_indicator(phi) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
  SUBCASE("agrees with the Schur complement oracle") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const int m = 1 + static_cast<int>(seed % 2);
      const MomentFunctional phi = moments_from_schur(random_free_schur(2, m, 2, 0.9, seed, 3));
      CHECK(std::abs(quasi_extreme_indicator(phi) - schur_complement_distance(gns_gram(phi), 2, 3, m)) < 1e-9);
    }
  }
  SUBCASE("monotone in N") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const FreeSeries B = random_free_schur(2, 1, 2, 0.95, seed, 6);
      double prev = std::numeric_limits<double>::infinity();
      for (int N = 1; N <= 5; ++N) {
        const double q = quasi_extreme_indicator(moments_from_schur(B.truncated(N)));
        CHECK(q <= prev + 1e-10);
        prev = q;
      }
    }
  }
}
