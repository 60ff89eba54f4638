#pragma once

#include <stdexcept>
#include <string>

namespace gmshadow {

/// Invalid mathematical input (parameter out of range, nonpositive field, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid or inconsistent scenario configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time stepping could not proceed (dt underflow without growth, NaN/Inf, retry limit).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gmshadow
