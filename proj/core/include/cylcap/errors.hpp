#pragma once

#include <stdexcept>
#include <string>

namespace cylcap {

/// Inverse map requested on the ray {xi' = 0, xi_n <= 0} where it is undefined.
struct ExcludedRayError : std::domain_error {
  explicit ExcludedRayError(const std::string& what) : std::domain_error(what) {}
};

/// Operator evaluation requested at xi = 0.
struct UndefinedAtOriginError : std::domain_error {
  explicit UndefinedAtOriginError(const std::string& what) : std::domain_error(what) {}
};

/// A grid is too coarse to represent some obstacle primitive.
struct ResolutionTooCoarseError : std::runtime_error {
  explicit ResolutionTooCoarseError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid run configuration or malformed input file.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cylcap
