#pragma once

#include <stdexcept>
#include <string>

namespace gnlm {

/// Invalid configuration or arguments supplied by the caller.
class UsageError : public std::invalid_argument {
  public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed or inconsistent input data (files, rasters, dimensions).
class DataError : public std::runtime_error {
  public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the mathematical domain of a function, or a degenerate
/// numeric situation (zero variance, single-bin quantization, ...).
class NumericError : public std::domain_error {
  public:
    explicit NumericError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace gnlm
