#ifndef GCRFBC_ERRORS_HPP
#define GCRFBC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gcrfbc {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape/dimension mismatches and invalid configuration values.
class StructuralError : public Error {
 public:
  explicit StructuralError(const std::string& msg) : Error(msg) {}
};

// Invalid data: non-finite values, bad labels, malformed files,
// degenerate datasets, undefined metrics.
class DataError : public Error {
 public:
  explicit DataError(const std::string& msg) : Error(msg) {}
};

// Numerical failures: factorization/conditioning problems.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

}  // namespace gcrfbc

#endif  // GCRFBC_ERRORS_HPP
