#pragma once

#include <stdexcept>
#include <string>

namespace sparsegain {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Incompatible matrix or partition dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An operation required a Hurwitz (stable) matrix and got an unstable one.
class StabilityError : public Error {
 public:
  using Error::Error;
};

/// A matrix failed a required definiteness test (SPD / PSD).
class DefinitenessError : public Error {
 public:
  using Error::Error;
};

/// Riccati synthesis failed (invariant subspace extraction or unstable closed loop).
class SynthesisError : public Error {
 public:
  using Error::Error;
};

/// An iterative kernel failed to converge or produced non-finite values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A gain violated a required sparsity structure.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries 1-based line/column of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace sparsegain
