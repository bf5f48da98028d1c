#pragma once

#include <cstdint>

#include "freeclark/series.hpp"

namespace freeclark {

/// Gaussian complex coefficients up to degree deg, rescaled to l1 norm rho,
/// stored at truncation N.  Deterministic in seed.
FreeSeries random_free_schur(int d, int m, int deg, double rho, std::uint64_t seed, int N);
CommSeries random_comm_schur(int d, int m, int deg, double rho, std::uint64_t seed, int N);

/// Z_j = S T_j S^{-1} with T_j strictly upper triangular of size n, scaled to
/// the given row norm.  All words of length n vanish.
NCPoint random_nilpotent_point(int d, int n, std::uint64_t seed, double row_norm = 0.9);

/// Haar-like unitary from the QR factorization of a Gaussian matrix.
Mat random_unitary(int m, std::uint64_t seed);

/// Gaussian complex matrix.
Mat random_gaussian(int rows, int cols, std::uint64_t seed);

}  // namespace freeclark
