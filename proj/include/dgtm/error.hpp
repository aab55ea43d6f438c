#pragma once

#include <stdexcept>
#include <string>

namespace dgtm {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed mesh file. Carries the 1-based line and column of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what), line_(line), column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Non-manifold, non-conforming or degenerate meshes.
class MeshError : public Error {
 public:
  using Error::Error;
};

/// Field layouts that do not agree between kernel arguments.
class LayoutError : public Error {
 public:
  using Error::Error;
};

/// Non-finite state after a time step.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, long step) : Error(what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

}  // namespace dgtm
