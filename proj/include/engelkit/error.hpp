#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace engelkit {

// A sample point: coordinate names with values, plus the value of whatever
// quantity was being tested there.
struct Witness {
  std::vector<std::pair<std::string, double>> point;
  double value = 0.0;
};

std::string to_string(const Witness& w);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class WitnessError : public Error {
 public:
  WitnessError(const std::string& message, Witness w)
      : Error(message + " [" + to_string(w) + "]"), witness_(std::move(w)) {}
  const Witness& witness() const { return witness_; }

 private:
  Witness witness_;
};

// Division by a near-zero value or logarithm of a non-positive value.
class SingularityError : public WitnessError {
 public:
  using WitnessError::WitnessError;
};

class DegenerateFrameError : public WitnessError {
 public:
  using WitnessError::WitnessError;
};

class InconsistentSystemError : public WitnessError {
 public:
  using WitnessError::WitnessError;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DegreeError : public Error {
 public:
  using Error::Error;
};

}  // namespace engelkit
