#pragma once

#include <stdexcept>
#include <string>

namespace qdecay {

/// Base class for all engine failures that are not plain precondition bugs.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MissedPole : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateNorm : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureNotConverged : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TruncationCapReached : public NumericalError {
 public:
  TruncationCapReached(const std::string& msg, double deficit)
      : NumericalError(msg), achieved_deficit(deficit) {}
  double achieved_deficit;
};

class DegenerateState : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class WindowTooShort : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qdecay
