#pragma once

#include <stdexcept>
#include <string>

namespace btlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class NegativeValuation : public Error {
 public:
  NegativeValuation() : Error("element has negative valuation") {}
};

class SingularMatrix : public Error {
 public:
  SingularMatrix() : Error("matrix is singular") {}
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

class WindowMismatch : public Error {
 public:
  using Error::Error;
};

class WindowEscape : public Error {
 public:
  using Error::Error;
};

class EqualLines : public Error {
 public:
  EqualLines() : Error("the two lines coincide") {}
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class NotHarmonic : public Error {
 public:
  using Error::Error;
};

}  // namespace btlab
