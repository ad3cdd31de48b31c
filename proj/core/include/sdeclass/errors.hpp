#pragma once

#include <stdexcept>
#include <string>

namespace sdeclass {

/// Invalid argument to a library call (bad dimension, empty input, K mismatch).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite value produced while simulating a path.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A score or functional could not be evaluated (e.g. non-positive diffusion).
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Baseline estimator could not be fitted (e.g. a class has no paths).
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or incompatible file contents.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sdeclass
