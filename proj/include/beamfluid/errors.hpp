#pragma once

#include <stdexcept>
#include <string>

namespace bf {

// Base of every library error; the CLI maps subclasses to exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

// Data that violates a compatibility condition (mean constraints, traces).
struct InvalidData : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct ContactError : Error {
  ContactError(const std::string& what, double time) : Error(what), time(time) {}
  double time;
};

struct SolverError : Error {
  using Error::Error;
};

struct ResolutionError : Error {
  using Error::Error;
};

struct GeometryError : Error {
  using Error::Error;
};

struct StepSizeError : Error {
  using Error::Error;
};

}  // namespace bf
