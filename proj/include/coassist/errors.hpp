#pragma once

#include <stdexcept>
#include <string>

namespace coassist {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Invalid or inconsistent configuration. `field()` names the offending key
// when one is known.
class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& message, std::string field = {})
        : Error(field.empty() ? message : field + ": " + message),
          field_(std::move(field)) {}

    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

class IoError : public Error {
  public:
    using Error::Error;
};

class NumericError : public Error {
  public:
    using Error::Error;
};

class HorizonExceeded : public Error {
  public:
    using Error::Error;
};

class InvalidAction : public Error {
  public:
    using Error::Error;
};

class EmptyTrustRegion : public Error {
  public:
    using Error::Error;
};

class DegenerateProfile : public Error {
  public:
    using Error::Error;
};

} // namespace coassist
