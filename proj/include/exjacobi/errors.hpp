#pragma once

#include <stdexcept>
#include <string>

namespace exjacobi {

/// Raised when a family specification fails validation (bad seed, divergent
/// weight, non-constant Riccati residual, ...).
struct FamilyError : std::runtime_error {
    explicit FamilyError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when an iterative numerical procedure fails to converge or a
/// quadrature does not stabilize.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace exjacobi
