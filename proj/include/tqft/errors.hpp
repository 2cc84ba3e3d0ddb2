#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace tqft {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation point lies within the configured radius of a pole of Phi_b.
class PoleError : public Error {
 public:
  PoleError(const std::string& what, std::complex<double> pole)
      : Error(what), pole_(pole) {}
  std::complex<double> pole() const { return pole_; }

 private:
  std::complex<double> pole_;
};

/// Evaluation point lies within the configured radius of a zero of Phi_b.
class ZeroError : public Error {
 public:
  ZeroError(const std::string& what, std::complex<double> zero)
      : Error(what), zero_(zero) {}
  std::complex<double> zero() const { return zero_; }

 private:
  std::complex<double> zero_;
};

class LadderOverflow : public Error {
 public:
  using Error::Error;
};

/// Arguments outside the region where an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

class SectorBoundaryError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A truncation or refinement loop could not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class DimensionGuard : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ShapeInfeasible : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotAdjacent : public Error {
 public:
  using Error::Error;
};

class PatternMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace tqft
