#pragma once

#include <stdexcept>
#include <string>

namespace fkqsd {

/// A specification or configuration violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative numerical solver did not reach its tolerance within the cap.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fkqsd

namespace fkqsd {

/// Every particle was killed or carried zero weight in one epoch.
class ExtinctionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fkqsd
