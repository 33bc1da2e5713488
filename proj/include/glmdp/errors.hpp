#pragma once

#include <stdexcept>
#include <string>

namespace glmdp {

// Base of every error the library raises. The CLI maps the concrete kinds
// onto process exit codes (config 2, data 3, solver 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, int step = -1) : Error(what), step_(step) {}
  // Step index (0-based) the failure refers to, or -1.
  int step() const { return step_; }

 private:
  int step_;
};

class EnvironmentError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

}  // namespace glmdp
