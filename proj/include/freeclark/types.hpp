#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace freeclark {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<cplx>;

/// Which side a product, multiplier or kernel lives on.
enum class Side { Left, Right };

inline const char* side_name(Side s) { return s == Side::Left ? "left" : "right"; }

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters (alphabet size, truncation degree, malformed words).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operands with incompatible d, m, N or matrix sizes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// I - B(0) (or another constant term) is singular or too close to it.
class NonUnitalError : public Error {
 public:
  using Error::Error;
};

/// Real part of a Herglotz constant term is not positive semidefinite.
class NotHerglotzError : public Error {
 public:
  using Error::Error;
};

/// A Gram matrix that should be positive semidefinite is not.
class NotPositiveError : public Error {
 public:
  using Error::Error;
};

/// A linear system that should be consistent is not.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace freeclark
