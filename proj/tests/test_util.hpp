#pragma once

#include <map>

#include "freeclark/freeclark.hpp"

namespace testutil {

using namespace freeclark;

inline Mat scal(cplx c) { return Mat::Constant(1, 1, c); }

/// Scalar free series from a word -> value map.
inline FreeSeries scalar_series(int d, int N, const std::map<Word, cplx>& c) {
  FreeSeries F(d, 1, N);
  for (const auto& [w, v] : c) F.at(w) = scal(v);
  return F;
}

inline CommSeries scalar_comm(int d, int N, const std::map<MultiIndex, cplx>& c) {
  CommSeries f(d, 1, N);
  for (const auto& [n, v] : c) f.at(n) = scal(v);
  return f;
}

inline double series_err(const FreeSeries& a, const FreeSeries& b) {
  double e = 0.0;
  for (int i = 0; i < std::min(a.size(), b.size()); ++i) e = std::max(e, max_abs(a[i] - b[i]));
  return e;
}

inline double series_err(const CommSeries& a, const CommSeries& b) {
  double e = 0.0;
  for (int i = 0; i < std::min(a.size(), b.size()); ++i) e = std::max(e, max_abs(a[i] - b[i]));
  return e;
}

inline Mat dense(const SpMat& S) { return Mat(S); }

}  // namespace testutil
