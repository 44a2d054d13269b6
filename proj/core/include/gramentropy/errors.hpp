#pragma once

#include <stdexcept>
#include <string>

namespace gramentropy {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: wrong shapes, non-finite values,
/// unparsable files, invalid configuration.
class InputError : public Error {
public:
  using Error::Error;
};

/// A matrix expected to be positive semidefinite has an eigenvalue below the
/// clamping tolerance.
class NotPsdError : public Error {
public:
  using Error::Error;
};

/// Argument outside the domain of an elementwise function (e.g. log of a
/// nonpositive entry).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A quantity that must be strictly positive collapsed to (numerical) zero.
class DegenerateError : public Error {
public:
  using Error::Error;
};

/// A documented mathematical precondition of an operation does not hold.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// Not a squared Hilbertian distance: the double-centred matrix is not PSD.
class NotHilbertianError : public Error {
public:
  using Error::Error;
};

namespace detail {
[[noreturn]] void throw_dimension_mismatch(const char* where, long rows_a, long cols_a,
                                           long rows_b, long cols_b);
}  // namespace detail

}  // namespace gramentropy
