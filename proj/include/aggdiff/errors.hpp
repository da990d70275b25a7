#pragma once

#include <stdexcept>
#include <string>

namespace aggdiff {

/// Thrown when a step produces values outside the proven bounds.
/// This cannot happen for correct inputs; it signals an implementation bug.
class invariant_violation : public std::runtime_error {
public:
  explicit invariant_violation(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a time step exceeds the explicit stability bound or a
/// solution value becomes non-finite.
class stability_error : public std::runtime_error {
public:
  explicit stability_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace aggdiff
