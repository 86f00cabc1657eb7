#pragma once

#include <stdexcept>
#include <string>

namespace cornex {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Supplied graph derivatives disagree with finite differences.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside the chart neighborhood U.
class ChartError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A symbol denominator vanishes on an unmasked frequency.
class MissingCutoffError : public Error {
 public:
  using Error::Error;
};

/// Nonzero trace where a vanishing trace is required (a delta term would appear).
class TraceError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class CertificationError : public Error {
 public:
  using Error::Error;
};

class UnreducibleTermError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace cornex
