#pragma once

#include <stdexcept>

namespace nmlm {

/// Non-positive density or temperature produced by an update.
class PositivityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The ES-BGK covariance tensor is not positive definite.
class EquilibriumDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The wall model produced an unphysical ghost state.
class BoundaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nmlm
