#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dampwave {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Errors caused by the caller's inputs. The CLI maps these to exit status 2.
class InputError : public Error {
 public:
  using Error::Error;
};

class SizeError : public InputError {
 public:
  using InputError::InputError;
};

class ParameterError : public InputError {
 public:
  using InputError::InputError;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class FilterError : public InputError {
 public:
  using InputError::InputError;
};

class HorizonError : public InputError {
 public:
  using InputError::InputError;
};

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

// Errors raised by numerical kernels. The CLI maps these to exit status 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public NumericalError {
 public:
  NumericalFailure(const std::string& what, std::vector<std::complex<double>> partial)
      : NumericalError(what), partial_(std::move(partial)) {}

  const std::vector<std::complex<double>>& partial() const noexcept { return partial_; }

 private:
  std::vector<std::complex<double>> partial_;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, int sector) : NumericalError(what), sector_(sector) {}
  int sector() const noexcept { return sector_; }

 private:
  int sector_;
};

class ConsistencyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConditioningError : public NumericalError {
 public:
  ConditioningError(const std::string& what, double condition)
      : NumericalError(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class StepSizeError : public NumericalError {
 public:
  StepSizeError(const std::string& what, double suggested_dt)
      : NumericalError(what), suggested_dt_(suggested_dt) {}
  double suggested_dt() const noexcept { return suggested_dt_; }

 private:
  double suggested_dt_;
};

}  // namespace dampwave
