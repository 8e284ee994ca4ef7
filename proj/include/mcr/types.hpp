#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcr {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A family constructor's hypotheses do not hold at some site.
class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

/// Tabulated kernel has no entry for a requested site pair.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// A tensor would exceed the configured entry budget.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// A vacuum expectation needs a Fock level above the truncation.
class TruncationOverflow : public Error {
 public:
  using Error::Error;
};

/// A K operator violates its spectral bounds.
class InvalidOperator : public Error {
 public:
  using Error::Error;
};

enum class Sign : signed char { plus = 1, minus = -1 };

inline Sign opposite(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }
inline char to_char(Sign s) { return s == Sign::plus ? '+' : '-'; }

/// Tolerances used throughout. Exact algebraic identities use `exact`;
/// Fock-space identities `fock`; long sums and eigendecompositions `numeric`.
struct Tolerances {
  double exact = 1e-12;
  double fock = 1e-10;
  double numeric = 1e-8;
};

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
inline double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

/// |a - b| / max(1, |b|).
inline double scaled_error(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace mcr
