#pragma once

#include <stdexcept>
#include <string>

namespace snewton {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroSeries : public Error {
 public:
  ZeroSeries() : Error("series has no nonzero coefficient") {}
};

class PoleAtZero : public Error {
 public:
  PoleAtZero() : Error("Laurent series evaluated at t = 0") {}
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class UnknownVariable : public Error {
 public:
  explicit UnknownVariable(const std::string& name) : Error("unknown variable '" + name + "'") {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class NonUnimodular : public Error {
 public:
  explicit NonUnimodular(long long det)
      : Error("transform matrix has determinant " + std::to_string(det) + ", expected +1 or -1") {}
};

class EmptyMatrix : public Error {
 public:
  EmptyMatrix() : Error("matrix series has no entries") {}
};

class SingularLeadingBlock : public Error {
 public:
  explicit SingularLeadingBlock(double rcond)
      : Error("leading coefficient matrix is numerically singular (rcond " + std::to_string(rcond) + ")"),
        rcond_(rcond) {}
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

class NotOnVariety : public Error {
 public:
  explicit NotOnVariety(double residual)
      : Error("start point is not on the variety (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class ZeroJacobian : public Error {
 public:
  ZeroJacobian() : Error("Jacobian series vanishes to the working order") {}
};

class DegenerateDenominator : public Error {
 public:
  DegenerateDenominator() : Error("Pade denominator system is rank deficient") {}
};

class PoleHit : public Error {
 public:
  PoleHit() : Error("Pade denominator vanishes at the evaluation point") {}
};

/// Malformed or inconsistent job description.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace snewton
