#include <doctest.h>

#include "test_util.hpp"

using namespace freeclark;
using namespace testutil;

namespace {

FreeSeries z1(int N) { return scalar_series(1, N, {{"1", 1.0}}); }

// Right Cayley transform computed with right products.  The inverse must be
// the inverse for the right product, checked here before use.
FreeSeries herglotz_right(const FreeSeries& BR) {
  const FreeSeries I = FreeSeries::identity(BR.d, BR.m, BR.N);
  const FreeSeries inv = transpose_series(invert_series(transpose_series(I - BR)));
  CHECK(series_err(series_multiply(I - BR, inv, Side::Right), I) < 1e-13);
  return series_multiply(inv, I + BR, Side::Right);
}

}  // namespace

TEST_CASE("cayley_to_herglotz examples") {
  CHECK(series_err(cayley_to_herglotz(FreeSeries(2, 2, 3)), FreeSeries::identity(2, 2, 3)) == 0.0);

  FreeSeries geo(1, 1, 5);
  geo.at("") = scal(1.0);
  for (int k = 1; k <= 5; ++k) geo.at(Word(k, '1')) = scal(2.0);
  CHECK(series_err(cayley_to_herglotz(z1(5)), geo) < 1e-15);

  const double c = 0.4;
  const FreeSeries H = cayley_to_herglotz(FreeSeries::constant(c * Mat::Identity(2, 2), 2, 2));
  CHECK(series_err(H, FreeSeries::constant((1 + c) / (1 - c) * Mat::Identity(2, 2), 2, 2)) < 1e-15);

  CHECK_THROWS_AS(cayley_to_herglotz(FreeSeries::identity(2, 1, 2)), NonUnitalError);
  CHECK_THROWS_AS(cayley_to_herglotz(FreeSeries::constant(scal(1.0 - 1e-9), 2, 2)), NonUnitalError);
}

TEST_CASE("cayley_to_schur examples") {
  CHECK(series_err(cayley_to_schur(FreeSeries::identity(2, 1, 3)), FreeSeries(2, 1, 3)) == 0.0);
  CHECK(series_err(cayley_to_schur(cayley_to_herglotz(z1(6))), z1(6)) < 1e-15);
  CHECK_THROWS(cayley_to_schur(FreeSeries::constant(scal(-1.0), 1, 2)));
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const FreeSeries B = random_free_schur(3, 2, 2, 0.9, seed, 4);
    CHECK(series_err(cayley_to_schur(cayley_to_herglotz(B)), B) < 1e-11);
  }
}

TEST_CASE("moments_from_herglotz examples") {
  const MomentFunctional delta = moments_from_herglotz(FreeSeries::identity(2, 2, 3));
  CHECK(max_abs(delta.phi_I - Mat::Identity(2, 2)) == 0.0);
  for (int i = 1; i < delta.words->size(); ++i) CHECK(max_abs(delta[i]) == 0.0);

  const MomentFunctional ones = moments_from_schur(z1(6));
  CHECK(ones.phi_I(0, 0) == cplx(1.0));
  for (int k = 1; k <= 6; ++k) CHECK(std::abs(ones.moment(Word(k, '1'))(0, 0) - 1.0) < 1e-14);

  // Oracle: H = I + 2 sum_k B^k and B^k = 2^{-k} sum_{|a|=k} Z^a.
  const MomentFunctional half = moments_from_schur(scalar_series(2, 4, {{"1", 0.5}, {"2", 0.5}}));
  for (const Word& a : enumerate_words(2, 4)) {
    if (a.empty()) continue;
    CHECK(std::abs(half.moment(a)(0, 0) - std::pow(0.5, static_cast<double>(a.size()))) < 1e-14);
  }

  CHECK_THROWS_AS(moments_from_herglotz(FreeSeries::constant(scal(-1.0), 1, 1)), NotHerglotzError);
}

TEST_CASE("herglotz_from_moments examples") {
  MomentFunctional delta(2, 1, 3);
  delta.set(0, scal(1.0));
  CHECK(series_err(herglotz_from_moments(delta, Side::Left), FreeSeries::identity(2, 1, 3)) == 0.0);

  MomentFunctional ones(1, 1, 4);
  for (int i = 0; i < ones.words->size(); ++i) ones.set(i, scal(1.0));
  FreeSeries geo(1, 1, 4);
  geo.at("") = scal(1.0);
  for (int k = 1; k <= 4; ++k) geo.at(Word(k, '1')) = scal(2.0);
  CHECK(series_err(herglotz_from_moments(ones, Side::Left), geo) == 0.0);

  // Exact inversion when Im H_0 = 0.
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    FreeSeries B = random_free_schur(2, 2, 2, 0.8, seed, 3);
    B[0] = (0.5 * (B[0] + B[0].adjoint())).eval();
    const FreeSeries H = cayley_to_herglotz(B);
    CHECK(series_err(herglotz_from_moments(moments_from_herglotz(H), Side::Left), H) < 1e-15);
    CHECK(series_err(herglotz_from_moments(moments_from_herglotz(H), Side::Right), transpose_series(H)) < 1e-15);
  }
}

TEST_CASE("three-way round trip") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const int d = 1 + static_cast<int>(seed % 3), m = 1 + static_cast<int>((seed / 3) % 3);
    const int N = d == 3 ? 3 : 5;
    const FreeSeries B = random_free_schur(d, m, 2, 0.9, seed, N);
    const FreeSeries H = cayley_to_herglotz(B);
    const MomentFunctional phi = moments_from_herglotz(H);
    const Mat im = 0.5 * (H[0] - H[0].adjoint());
    const FreeSeries H2 = herglotz_from_moments(phi, Side::Left, im);
    CHECK(series_err(cayley_to_schur(H2), B) < 1e-10);
  }
}

TEST_CASE("zero imaginary convention changes only the constant rotation") {
  // With Im H_0 dropped the round trip lands on a different Schur function
  // whose Herglotz data differ only in the constant term.
  const FreeSeries B = random_free_schur(2, 1, 2, 0.8, 77, 3);
  const FreeSeries H = cayley_to_herglotz(B);
  const FreeSeries H0 = herglotz_from_moments(moments_from_herglotz(H), Side::Left);
  FreeSeries diff = H - H0;
  CHECK(std::abs(diff[0](0, 0).real()) < 1e-15);
  diff[0].setZero();
  CHECK(series_err(diff, FreeSeries(2, 1, 3)) < 1e-15);
}

TEST_CASE("schur_pair_from_moments") {
  MomentFunctional delta(2, 2, 3);
  delta.set(0, Mat::Identity(2, 2));
  const auto p0 = schur_pair_from_moments(delta);
  CHECK(series_err(p0.first, FreeSeries(2, 2, 3)) == 0.0);
  CHECK(series_err(p0.second, FreeSeries(2, 2, 3)) == 0.0);

  MomentFunctional ones(1, 1, 5);
  for (int i = 0; i < ones.words->size(); ++i) ones.set(i, scal(1.0));
  const auto p1 = schur_pair_from_moments(ones);
  CHECK(series_err(p1.first, z1(5)) < 1e-11);
  CHECK(series_err(p1.second, z1(5)) < 1e-11);

  const FreeSeries B = random_free_schur(3, 2, 2, 0.8, 4, 3);
  const auto p = schur_pair_from_moments(moments_from_schur(B));
  CHECK(series_err(p.second, transpose_series(p.first)) == 0.0);
}

TEST_CASE("transpose coherence and Herglotz positivity") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const FreeSeries B = random_free_schur(2, 2, 2, 0.9, seed, 4);
    const MomentFunctional phi = moments_from_schur(B);
    // phi(L^g) = (H^R_g)*/2 with H^R built from B^R by right products.
    const FreeSeries HR = herglotz_right(transpose_series(B));
    for (int i = 1; i < phi.words->size(); ++i) CHECK(max_abs(phi[i] - 0.5 * HR[i].adjoint()) < 1e-13);
    CHECK(series_err(symmetrize_series(cayley_to_herglotz(B)), symmetrize_series(HR)) < 1e-13);
    for (Side s : {Side::Left, Side::Right}) CHECK(psd_check(herglotz_kernel_from_moments(phi, s).G).pass);
  }
}

TEST_CASE("non-unital guard") {
  CHECK_NOTHROW(require_non_unital(FreeSeries::constant(scal(0.99), 2, 1)));
  CHECK_THROWS_AS(require_non_unital(FreeSeries::constant(scal(cplx(0, 1)), 2, 1)), NonUnitalError);
  CHECK_THROWS_AS(moments_from_schur(FreeSeries::identity(2, 2, 2)), NonUnitalError);
}
