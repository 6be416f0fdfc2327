#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace anisomesh {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mesh or field failed an invariant check. The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class NonConforming : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateTriangle : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DanglingVertex : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DuplicateEntity : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class PointOutsideDomain : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotSPD : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonPositiveAlpha : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ZeroSigma : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class MissingExactSolution : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};

/// Linear solve did not reach the residual contract.
class SolverBreakdown : public Error {
 public:
  SolverBreakdown(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace anisomesh
