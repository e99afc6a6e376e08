#pragma once

#include <stdexcept>
#include <string>

namespace proca {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or domain input (bad grid, non-positive index,
/// rejected symbol class, malformed config file, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Time step exceeds the stability bound of the explicit integrator.
class CflError : public Error {
 public:
  using Error::Error;
};

/// An iterative or direct solve failed to reach its tolerance.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_ = 0.0;
  int iterations_ = 0;
};

/// Non-finite values appeared during evolution.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double t_first)
      : Error(what), t_first_(t_first) {}
  double t_first() const { return t_first_; }

 private:
  double t_first_ = 0.0;
};

/// A measurement (e.g. spectral peak search) could not produce a result.
class MeasurementError : public Error {
 public:
  using Error::Error;
};

}  // namespace proca
