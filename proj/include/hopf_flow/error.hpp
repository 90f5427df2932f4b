#pragma once

#include <stdexcept>
#include <string>

namespace hopf_flow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the supported domain of an operation (non-finite values,
/// arguments out of range).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Coordinate or field singularity: origin, z-axis, r = 0.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Coefficient of the highest derivative of a reduced ODE vanishes.
class TurningPointError : public Error {
 public:
  TurningPointError(const std::string& what, double locus_value)
      : Error(what), locus_value_(locus_value) {}
  double locus_value() const noexcept { return locus_value_; }

 private:
  double locus_value_;
};

class NoRootError : public Error {
 public:
  using Error::Error;
};

class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

/// Complex-valued quantity where a real one is required.
class RegionError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace hopf_flow
