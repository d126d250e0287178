#pragma once

#include <stdexcept>
#include <string>

namespace qmsd {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonInvertible : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

/// Argument outside the documented domain (angles, radii, moduli).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// State does not commute with A_{0,0}, so it has no (a,b,b) coordinates.
class SubspaceError : public Error {
 public:
  using Error::Error;
};

/// The trivial-syndrome sector of a code table does not have rank d^k.
class PhaseConventionError : public Error {
 public:
  using Error::Error;
};

class LogicalAlgebraError : public Error {
 public:
  using Error::Error;
};

class PostselectionImpossible : public Error {
 public:
  using Error::Error;
};

class NoThresholdInBracket : public Error {
 public:
  using Error::Error;
};

}  // namespace qmsd
