#pragma once

#include <stdexcept>
#include <string>

namespace cascyl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGeometry : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative or adaptive procedure hit its refinement cap.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// The adaptive sum over translation orders of one matrix element did not
/// settle inside its window cap.
class PSumNoConvergence : public NoConvergence {
 public:
  using NoConvergence::NoConvergence;
};

class NonPositiveDeterminant : public Error {
 public:
  using Error::Error;
};

/// A finite-difference stencil point would leave the valid geometry.
class StencilDomain : public Error {
 public:
  using Error::Error;
};

}  // namespace cascyl
