#pragma once

#include <stdexcept>
#include <string>

namespace reflectlab {

/// Broad failure classes; the CLI maps them onto exit codes.
enum class ErrorKind {
  domain,     ///< invalid input or state outside the modeled regime
  solver,     ///< a root finder / linear solver / Newton iteration failed
  diagnostic  ///< an internal consistency check disagreed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

/// Vacuum: the Bernoulli argument of pi^{-1} is not positive.
class VacuumError : public DomainError {
 public:
  explicit VacuumError(const std::string& what) : DomainError(what) {}
};

/// Zero velocity jump, so no shock normal exists.
class DegenerateShockError : public DomainError {
 public:
  explicit DegenerateShockError(const std::string& what) : DomainError(what) {}
};

/// Configuration leaves the regime a construction assumes (ellipticity, type, ...).
class RegimeError : public DomainError {
 public:
  explicit RegimeError(const std::string& what) : DomainError(what) {}
};

class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what) : Error(ErrorKind::solver, what) {}
};

class DiagnosticError : public Error {
 public:
  explicit DiagnosticError(const std::string& what)
      : Error(ErrorKind::diagnostic, what) {}
};

}  // namespace reflectlab
