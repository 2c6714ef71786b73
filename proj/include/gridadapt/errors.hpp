#pragma once

#include <stdexcept>
#include <string>

namespace gridadapt {

/// Invalid argument or configuration value.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Coordinate or index outside the valid extent.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// File could not be read, written or decoded.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent derived data (missing salient point, bad cross reference).
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation cannot be carried out on the given inputs.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gridadapt
