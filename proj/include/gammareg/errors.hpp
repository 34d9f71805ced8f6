#pragma once

#include <stdexcept>
#include <string>

namespace gammareg {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A density evaluation produced NaN or +inf where a finite value was required.
class NonFiniteDensity : public Error {
 public:
  using Error::Error;
};

/// The log argument of a cross entropy collapsed to zero: every density
/// vanished at the data.  Surfaced as an error rather than -inf so that a
/// misconfigured objective cannot silently break an optimizer.
class DegenerateObjective : public Error {
 public:
  using Error::Error;
};

/// Numerical integration could not produce a usable value (total underflow,
/// or an integrand that is undefined, e.g. a squared point mass).
class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

/// A response value outside the support of the model (e.g. y=0.5 for a
/// binary logistic model, or a negative count for Poisson).
class UnsupportedResponse : public Error {
 public:
  using Error::Error;
};

/// A truncated series (Poisson power integral) failed its tail bound at the
/// configured cap.
class TruncationNotConverged : public Error {
 public:
  using Error::Error;
};

/// Design matrix is rank deficient where a full-rank design is required.
class SingularDesign : public Error {
 public:
  using Error::Error;
};

/// Backtracking line search failed to find descent at the initial point.
class NoDescent : public Error {
 public:
  using Error::Error;
};

/// Two vectors that must have equal length do not.
class LengthMismatch : public Error {
 public:
  using Error::Error;
};

/// An invalid configuration value (non-positive gamma, epsilon outside
/// [0,1), negative replicate count, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File or stream I/O failure; the message carries the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gammareg
