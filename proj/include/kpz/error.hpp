#pragma once

#include <stdexcept>
#include <string>

namespace kpz {

/// Process exit codes shared by the CLI and the error types below.
enum class ExitCode : int { ok = 0, invalid_params = 2, degenerate = 3, quadrature = 4 };

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode code() const = 0;
};

/// Parameters outside an operation's domain or outside a closed-form family.
class DomainError : public Error {
 public:
  using Error::Error;
  ExitCode code() const override { return ExitCode::invalid_params; }
};

/// Statistical degeneracy, e.g. importance weights with collapsed ESS.
class DegenerateError : public Error {
 public:
  using Error::Error;
  ExitCode code() const override { return ExitCode::degenerate; }
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double partial, double abs_err)
      : Error(what), partial_(partial), abs_err_(abs_err) {}
  ExitCode code() const override { return ExitCode::quadrature; }
  double partial() const { return partial_; }
  double abs_err() const { return abs_err_; }

 private:
  double partial_;
  double abs_err_;
};

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

}  // namespace kpz
