#pragma once

#include <stdexcept>
#include <string>

namespace tropeig {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Kleene star requested on a graph with a positive-weight circuit.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Input lacks a structural property (monomial, multi-circuit of G(A), critical, ...).
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration would exceed the configured guard.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// The maximum cycle mean is ε, so there is no critical graph or eigenvector.
class NoCriticalGraphError : public Error {
 public:
  using Error::Error;
};

class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// No perturbation satisfying the genericity assumption was found.
class GenericityError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Malformed matrix document; row/column are 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, long row = 0, long col = 0)
      : Error(row > 0 ? what + " (row " + std::to_string(row) + ", column " +
                            std::to_string(col) + ")"
                      : what),
        row_(row),
        col_(col) {}

  long row() const noexcept { return row_; }
  long col() const noexcept { return col_; }

 private:
  long row_;
  long col_;
};

}  // namespace tropeig
