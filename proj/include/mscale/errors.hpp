#pragma once

#include <stdexcept>
#include <string>

namespace mscale {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation at a singular point of a weight (inside the excluded neighborhood).
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Spacelike or null input where a timelike one is required.
class SignatureError : public Error {
 public:
  using Error::Error;
};

class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

/// Charged dynamics requested on a geometry that is not multiscale only along
/// spatial directions (v0(t) = 1, w_mu = 1).
class CompatibilityError : public Error {
 public:
  using Error::Error;
};

/// Integration aborted because the normalization drifted past the hard limit.
class ConstraintDriftError : public Error {
 public:
  ConstraintDriftError(const std::string& what, std::string dump)
      : Error(what), dump_(std::move(dump)) {}
  const std::string& dump() const { return dump_; }

 private:
  std::string dump_;
};

class InversionError : public Error {
 public:
  using Error::Error;
};

/// Grid operation requested where no stencil fits.
class StencilError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace mscale
