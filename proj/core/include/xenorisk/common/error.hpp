#pragma once

#include <stdexcept>
#include <string>

namespace xenorisk {

// Bad arguments, flags, or configuration values. The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing, unreadable, or malformed input data. The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace xenorisk
