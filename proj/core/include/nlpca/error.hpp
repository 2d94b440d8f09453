#pragma once

#include <stdexcept>
#include <string>

namespace nlpca {

/// Bad dimensions, out-of-range indices or hyperparameters outside their domain.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// File could not be opened, read or written, or its contents do not parse.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine could not produce a usable result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nlpca
