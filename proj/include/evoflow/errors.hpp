#pragma once

#include <stdexcept>
#include <string>

namespace evoflow {

/// Invalid numeric parameter (probability out of range, reversed interval, ...).
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// API misuse: out-of-order observation, remove_min on an empty population.
class UsageError : public std::logic_error {
 public:
  explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

/// Request exceeds what the implementation will compute (e.g. 3^n enumeration).
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace evoflow
