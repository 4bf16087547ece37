#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace rqm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// Numerical tolerances used across the library. All overridable per call.
struct Tolerances {
  double unitality = 1e-10;
  double invariance = 1e-9;
  double eig_cluster = 1e-8;
  double strict_positivity = 1e-12;
  double zero_trace = 1e-300;  // running trace below this is an exact structural zero
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  CapExceeded(std::uint64_t required, std::uint64_t cap)
      : Error("enumeration cap exceeded: need " + std::to_string(required) +
              " words, cap is " + std::to_string(cap)),
        required(required),
        cap(cap) {}
  std::uint64_t required;
  std::uint64_t cap;
};

class NonUniqueInvariantState : public Error {
 public:
  explicit NonUniqueInvariantState(int fixed_space_dim)
      : Error("eigenvalue 1 of the channel is not simple; fixed-point space dimension " +
              std::to_string(fixed_space_dim)),
        fixed_space_dim(fixed_space_dim) {}
  int fixed_space_dim;
};

class NotPositive : public Error {
 public:
  using Error::Error;
};

inline Matrix identity(int d) { return Matrix::Identity(d, d); }

/// Kronecker product, column-stacking compatible.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// vec(X): column stacking, so vec(AXB) = (B^T (x) A) vec(X).
inline Vector vec(const Matrix& x) {
  return Eigen::Map<const Vector>(x.data(), x.size());
}

inline Matrix unvec(const Vector& v, int d) {
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

inline Matrix hermitize(const Matrix& x) { return 0.5 * (x + x.adjoint()); }

inline double logsumexp(const std::vector<double>& xs) {
  double m = kNegInf;
  for (double x : xs)
    if (x > m) m = x;
  if (m == kNegInf) return kNegInf;
  double s = 0;
  for (double x : xs)
    if (x != kNegInf) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace rqm
