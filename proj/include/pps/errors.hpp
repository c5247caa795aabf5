#pragma once

#include <stdexcept>
#include <string>

namespace pps {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A violated precondition of an analysis routine (e.g. parameters outside
/// the region where a closed form is valid).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Iterative procedure did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

enum class SingularBlock { Full, K11, Schur };

/// Factorization of a (block) mass matrix failed.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, SingularBlock block,
                      double rcond)
      : Error(what), block_(block), rcond_(rcond) {}
  SingularBlock block() const { return block_; }
  double reciprocal_condition() const { return rcond_; }

 private:
  SingularBlock block_;
  double rcond_;
};

/// Time integration produced non-finite or exploding values.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Malformed problem configuration (config file, unknown problem name, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Writes a warning line to stderr. Library routines use this for
/// conditions that must not abort a run.
void warn(const std::string& message);

}  // namespace pps
