#pragma once

#include <stdexcept>
#include <string>

namespace hyperdon {

struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CertificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when the kernel of a discretized operator cannot be separated from
// the rest of its spectrum.
struct DiscretizationError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace hyperdon
