#include "freeclark/herglotz.hpp"

#include "freeclark/linalg.hpp"

namespace freeclark {

MomentFunctional::MomentFunctional(int d_, int m_, int N_)
    : d(d_), m(m_), N(N_), words(word_table(d_, N_)), phi_I(Mat::Identity(m_, m_)) {
  moments.assign(words->size(), Mat::Zero(m, m));
  moments[0] = phi_I;
}

const Mat& MomentFunctional::moment(const Word& w) const {
  const int i = words->index(w);
  if (i < 0) throw ConfigError("moment for word '" + w + "' is not available at length " + std::to_string(N));
  return moments[i];
}

void MomentFunctional::set(int i, const Mat& v) {
  moments[i] = v;
  if (i == 0) phi_I = v;
}

MomentFunctional MomentFunctional::truncated(int N2) const {
  if (N2 > N) throw ConfigError("cannot extend moment data beyond its length");
  MomentFunctional r(d, m, N2);
  for (int i = 0; i < r.words->size(); ++i) r.set(i, moments[i]);
  return r;
}

Mat resolve(const Cancellation& c, const MomentFunctional& phi) {
  switch (c.kind) {
    case Cancellation::Kind::RightRemainder:
      return phi.moment(c.rest);
    case Cancellation::Kind::LeftRemainder:
      return phi.moment(c.rest).adjoint();
    case Cancellation::Kind::Zero:
      break;
  }
  return Mat::Zero(phi.m, phi.m);
}

void require_non_unital(const FreeSeries& B) {
  if (op_norm(B[0]) >= 1.0 - kNonUnitalMargin)
    throw NonUnitalError("||B(0)|| must be below 1 - 1e-8");
}

FreeSeries cayley_to_herglotz(const FreeSeries& B) {
  require_non_unital(B);
  const FreeSeries I = FreeSeries::identity(B.d, B.m, B.N);
  return series_multiply(invert_series(I - B), I + B, Side::Left);
}

FreeSeries cayley_to_schur(const FreeSeries& H) {
  const FreeSeries I = FreeSeries::identity(H.d, H.m, H.N);
  return series_multiply(invert_series(H + I), H - I, Side::Left);
}

MomentFunctional moments_from_herglotz(const FreeSeries& H) {
  MomentFunctional phi(H.d, H.m, H.N);
  const Mat re = 0.5 * (H[0] + H[0].adjoint());
  const PsdFactor f = psd_factor(re, 0.0);
  if (f.min_eig < -1e-9 * std::max(1.0, f.lambda_max))
    throw NotHerglotzError("real part of H(0) is not positive semidefinite");
  phi.set(0, re);
  for (int a = 1; a < H.size(); ++a) phi.set(a, 0.5 * H[H.words->transpose_index(a)].adjoint());
  return phi;
}

FreeSeries herglotz_from_moments(const MomentFunctional& phi, Side side, const Mat& imag_part) {
  FreeSeries H(phi.d, phi.m, phi.N);
  H.coeffs[0] = phi.phi_I;
  if (imag_part.size() > 0) {
    if (imag_part.rows() != phi.m || imag_part.cols() != phi.m)
      throw DimensionError("imaginary constant has the wrong size");
    H.coeffs[0] += imag_part;
  }
  for (int a = 1; a < H.size(); ++a) H.coeffs[a] = 2.0 * phi[H.words->transpose_index(a)].adjoint();
  return side == Side::Left ? H : transpose_series(H);
}

MomentFunctional moments_from_schur(const FreeSeries& B) { return moments_from_herglotz(cayley_to_herglotz(B)); }

std::pair<FreeSeries, FreeSeries> schur_pair_from_moments(const MomentFunctional& phi) {
  FreeSeries BL = cayley_to_schur(herglotz_from_moments(phi, Side::Left));
  FreeSeries BR = transpose_series(BL);
  return {std::move(BL), std::move(BR)};
}

}  // namespace freeclark
