#pragma once

#include <stdexcept>
#include <string>

namespace delam {

/// Invalid geometry or mesh data (bad dimensions, degenerate triangles, ...).
class MeshError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid configuration input. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure of a numerical kernel (factorization, QP iteration cap, ...).
/// Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace delam
