#pragma once

#include <stdexcept>
#include <string>

namespace rfdeauth {

// Malformed or missing input (files, rows, keys).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Well-formed input that violates a documented invariant or precondition.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rfdeauth
