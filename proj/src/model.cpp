#include "aggdiff/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace aggdiff {

const char* to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::NoFlux ? "noflux" : "hostile";
}

namespace detail {

void require_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error(std::string(what) + " must lie in [0,1], got " +
                            std::to_string(v));
  }
}

}  // namespace detail

double mobility_K(double u) {
  detail::require_unit(u, "density");
  return (u * u - u * u * u) / 2.0;
}

double diffusivity_D(double u) {
  detail::require_unit(u, "density");
  return u * u * (u - 0.5);
}

double coupling_C(double x, double y) {
  detail::require_unit(x, "density x");
  detail::require_unit(y, "density y");
  return detail::coupling_raw(x, y);
}

double bound_function_f(double x, double y) {
  detail::require_unit(x, "argument x");
  detail::require_unit(y, "argument y");
  return x + x * y * (x + y - 1.0) * (y - x);
}

const ModelFunctions& ModelFunctions::canonical() {
  static const ModelFunctions m{
      kAlpha,
      [](double u) { return (u * u - u * u * u) / 2.0; },
      [](double u) { return u * u * (u - 0.5); },
  };
  return m;
}

void ModelFunctions::validate(int samples) const {
  if (!diffusivity) throw std::invalid_argument("diffusivity function not set");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("threshold alpha must lie in (0,1)");
  const double tol = 1e-9;
  if (std::abs(diffusivity(alpha)) > tol)
    throw std::invalid_argument("diffusivity must vanish at alpha");
  for (int i = 1; i < samples; ++i) {
    const double s = static_cast<double>(i) / samples;
    const double lo = s * alpha;
    if (lo > tol && lo < alpha - tol && diffusivity(lo) >= 0.0)
      throw std::invalid_argument("diffusivity must be negative below alpha");
    const double hi = alpha + s * (1.0 - alpha);
    if (hi > alpha + tol && hi < 1.0 - tol && diffusivity(hi) <= 0.0)
      throw std::invalid_argument("diffusivity must be positive above alpha");
  }
}

std::vector<double> extend_with_ghosts(std::span<const double> interior,
                                       BoundaryCondition bc) {
  if (interior.empty()) throw std::invalid_argument("interior must be nonempty");
  std::vector<double> full(interior.size() + 2);
  for (std::size_t i = 0; i < interior.size(); ++i) full[i + 1] = interior[i];
  if (bc == BoundaryCondition::NoFlux) {
    full.front() = interior.front();
    full.back() = interior.back();
  } else {
    full.front() = 0.0;
    full.back() = 0.0;
  }
  return full;
}

}  // namespace aggdiff
