#pragma once

#include <stdexcept>
#include <string>

namespace hmz {

/// Argument outside the mathematical domain of an operation (non-finite t, x outside [0,1], ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Lengths or dimensions of inputs disagree.
class shape_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Caller violated a precondition (index range, parameter regime, missing decay flag).
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested size exceeds what the implementation supports.
class capacity_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Iterative method failed to converge.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hmz
