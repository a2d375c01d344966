#pragma once

#include <stdexcept>
#include <string>

namespace phasetraffic {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// state or argument outside the admissible set
class DomainError : public Error {
 public:
  using Error::Error;
};

// velocity requested at rho=0 away from the vacuum convention
class UndefinedVelocity : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegenerateJump : public Error {
 public:
  using Error::Error;
};

// no root inside the bracket; should not happen for validated models
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// wrong solver family for the model, bad call sequence
class UsageError : public Error {
 public:
  using Error::Error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace phasetraffic
