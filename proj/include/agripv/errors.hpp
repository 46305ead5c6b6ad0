#pragma once

#include <stdexcept>
#include <string>

namespace agripv {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid input data or configuration (bad scenario file, violated
// invariant, malformed weather file). CLI maps this to exit code 1.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Failure while running a simulation or writing results (I/O, degenerate
// numeric state). CLI maps this to exit code 2.
class SimulationError : public Error {
 public:
  explicit SimulationError(const std::string& msg) : Error(msg) {}
};

}  // namespace agripv
