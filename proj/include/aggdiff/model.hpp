#pragma once

#include <functional>
#include <span>
#include <vector>

namespace aggdiff {

/// Density threshold where the canonical effective diffusivity changes
/// sign: aggregation below, diffusion above.
inline constexpr double kAlpha = 0.5;

/// Rounding slack allowed on the proven [0,1] bounds of lattice values.
inline constexpr double kBoundSlack = 1e-12;

/// Boundary handling for the one-dimensional habitat.
///   NoFlux  — ghost values mirror the adjacent interior value.
///   Hostile — ghost values are pinned to zero (absorbing surroundings).
enum class BoundaryCondition { NoFlux, Hostile };

const char* to_string(BoundaryCondition bc);

/// Per-step movement probability of an individual at density u.
/// K(u) = (u^2 - u^3)/2, zero at both endpoints, maximum 2/27 at u = 2/3.
/// Throws std::domain_error outside [0,1].
double mobility_K(double u);

/// Effective transport coefficient D(u) = K - u K' = u^2 (u - 1/2).
/// Negative on (0,1/2) (aggregation), positive on (1/2,1) (diffusion).
/// Throws std::domain_error outside [0,1].
double diffusivity_D(double u);

/// Coupling weight C(x,y) = (x y / 2)(x + y - 1) multiplying the neighbor
/// difference in the lattice update. Symmetric; in [0,1/2] when both
/// arguments lie in [1/2,1]. Throws std::domain_error outside [0,1]^2.
double coupling_C(double x, double y);

/// Per-site bounding function f(x,y) = x + x y (x + y - 1)(y - x).
/// Maps [0,1]^2 into [0,1]; this is what keeps lattice values bounded.
/// Throws std::domain_error outside [0,1]^2.
double bound_function_f(double x, double y);

/// Scalar model functions with a configurable sign-change threshold.
/// The lattice update always uses the canonical pair; the continuum solver
/// accepts any diffusivity with the canonical sign pattern.
struct ModelFunctions {
  double alpha = kAlpha;
  std::function<double(double)> mobility;
  std::function<double(double)> diffusivity;

  static const ModelFunctions& canonical();

  /// Checks D(alpha) ~ 0, D < 0 on (0,alpha), D > 0 on (alpha,1) on a
  /// sample grid. Throws std::invalid_argument on violation.
  void validate(int samples = 1000) const;
};

/// Extends interior values u_1..u_{N-1} with ghost entries u_0 and u_N
/// chosen by the boundary condition. Result has length N+1.
std::vector<double> extend_with_ghosts(std::span<const double> interior,
                                       BoundaryCondition bc);

namespace detail {

/// Coupling without the domain gate, for solver-internal arithmetic where
/// values may carry rounding slack beyond [0,1].
inline double coupling_raw(double x, double y) {
  return (x * y / 2.0) * (x + y - 1.0);
}

void require_unit(double v, const char* what);

}  // namespace detail

}  // namespace aggdiff
