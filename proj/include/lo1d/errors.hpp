#pragma once

#include <stdexcept>
#include <string>

namespace lo1d {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double value, double error)
      : Error(what), value_(value), error_(error) {}
  double value() const { return value_; }
  double error() const { return error_; }

 private:
  double value_;
  double error_;
};

class NoBracket : public Error {
 public:
  using Error::Error;
};

class ContactNotPointwise : public Error {
 public:
  ContactNotPointwise() : Error("contact potential has no pointwise value") {}
};

class DistributionalDerivative : public Error {
 public:
  DistributionalDerivative()
      : Error("approximate contact potential: second derivative is 2*delta(r-sigma)/sigma^2; use the moment functions") {}
};

class DivergentIntegral : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NormalizationDrift : public Error {
 public:
  using Error::Error;
};

class CertificationFailed : public Error {
 public:
  using Error::Error;
};

class IncompatibleSpec : public Error {
 public:
  using Error::Error;
};

class ObjectiveEvaluationFailed : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace lo1d
