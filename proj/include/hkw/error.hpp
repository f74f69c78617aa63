#pragma once

#include <stdexcept>
#include <string>

namespace hkw {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A structure identity (I^2 = -Id, metric compatibility, ...) is violated.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Odd complex dimension, degenerate lattice or degenerate restricted form.
class DegreeError : public Error {
 public:
  using Error::Error;
};

}  // namespace hkw
