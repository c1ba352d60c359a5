#pragma once

#include <stdexcept>
#include <string>

namespace lzeta {

/// Base for every failure the library reports. Each subclass maps onto one
/// CLI exit code (see tools/zeta_main.cpp).
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text: problem files, polynomial strings.
class ParseError : public Error {
public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

/// Input parsed fine but is outside what the engine accepts.
class SemanticError : public Error {
public:
  using Error::Error;
};

/// A unit could not be shown nonvanishing on its box.
class CertificationError : public Error {
public:
  using Error::Error;
};

/// Newton polygon (or strict transform) outside the supported class.
class DegeneracyError : public Error {
public:
  using Error::Error;
};

/// Term budget exceeded while rewriting.
class ResourceError : public Error {
public:
  using Error::Error;
};

/// Quadrature or contour did not reach the requested tolerance.
class AccuracyError : public Error {
public:
  AccuracyError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

private:
  double achieved_;
};

/// Evaluation requested inside the exclusion disc of a candidate pole.
class PoleProximityError : public Error {
public:
  using Error::Error;
};

/// Internal invariant broken. Never expected on valid input.
class InternalError : public Error {
public:
  using Error::Error;
};

}  // namespace lzeta
