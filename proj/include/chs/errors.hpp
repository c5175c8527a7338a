#pragma once

#include <stdexcept>
#include <string>

namespace chs {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid numeric parameter (dimension, cutoff, step size, exponent range).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Fields or grids that live on incompatible spectra.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Operator applied outside its domain, e.g. a negative power of A on a
/// field with a nonzero mean component.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Regression or rate estimation without enough usable levels.
class InsufficientLevelsError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace chs
