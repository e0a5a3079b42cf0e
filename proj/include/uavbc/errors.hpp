#pragma once

#include <stdexcept>
#include <string>

namespace uavbc {

// Base of every error the library throws. Callers that only care about
// "the solver refused" can catch this one.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
 public:
  explicit InvalidParams(std::string field)
      : Error("invalid parameter: " + field), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidTrajectory : public Error {
 public:
  using Error::Error;
};

class PowerBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class TimeOutOfRange : public Error {
 public:
  using Error::Error;
};

class ZeroSpeedLeg : public Error {
 public:
  using Error::Error;
};

class DegenerateLocations : public Error {
 public:
  using Error::Error;
};

class InfeasibleFlight : public Error {
 public:
  using Error::Error;
};

class OutsideValidity : public Error {
 public:
  using Error::Error;
};

class DiscretizationInvalid : public Error {
 public:
  using Error::Error;
};

class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

class NoSignChange : public Error {
 public:
  using Error::Error;
};

}  // namespace uavbc
