#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace frechet {

/// Base class for all numerical and I/O failures raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatchError : public Error {
 public:
  explicit DimensionMismatchError(const std::string& what) : Error(what) {}
};

class NotHermitianError : public Error {
 public:
  explicit NotHermitianError(const std::string& what) : Error(what) {}
};

class SingularError : public Error {
 public:
  explicit SingularError(const std::string& what) : Error(what) {}
};

class ZeroStartVectorError : public Error {
 public:
  explicit ZeroStartVectorError(const std::string& what) : Error(what) {}
};

class SeriousBreakdownError : public Error {
 public:
  SeriousBreakdownError(const std::string& what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

class StartVectorsBiorthogonalError : public Error {
 public:
  explicit StartVectorsBiorthogonalError(const std::string& what) : Error(what) {}
};

class DeflationDetectedError : public Error {
 public:
  DeflationDetectedError(const std::string& what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class UnsupportedFieldError : public Error {
 public:
  explicit UnsupportedFieldError(const std::string& what) : Error(what) {}
};

class UnsupportedFunctionError : public Error {
 public:
  explicit UnsupportedFunctionError(const std::string& what) : Error(what) {}
};

class QuadratureNotConvergedError : public Error {
 public:
  explicit QuadratureNotConvergedError(const std::string& what) : Error(what) {}
};

class SpectrumOnClosedNegativeAxisError : public Error {
 public:
  explicit SpectrumOnClosedNegativeAxisError(const std::string& what) : Error(what) {}
};

class MaxDimensionReachedError : public Error {
 public:
  explicit MaxDimensionReachedError(const std::string& what) : Error(what) {}
};

}  // namespace frechet
