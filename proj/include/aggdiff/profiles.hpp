#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace aggdiff {

/// Parsed initial-data specification. Supported forms:
///   "0.4,0.7,0.2"            explicit comma list (ignores n)
///   "constant 0.6"           constant profile
///   "ramp 0.55 0.95"         linear in x from a at x=0 to b at x=1
///   "0.75+0.1*cos(pi*x)"     cosine profile a+b*cos(k*pi*x), k optional
///   "random 0.5 1 seed 42"   iid uniform values in [lo,hi]; the seed part
///                            is optional and falls back to the run seed
struct InitialProfile {
  enum class Kind { List, Constant, Ramp, Cosine, Random };
  Kind kind = Kind::Constant;
  std::vector<double> values;  // List
  double a = 0.0;              // Constant/Ramp/Cosine base
  double b = 0.0;              // Ramp end / Cosine amplitude
  double k = 1.0;              // Cosine multiples of pi
  double lo = 0.0, hi = 1.0;   // Random
  std::optional<std::uint64_t> seed;
  std::string text;

  /// Evaluates the profile at x in [0,1]. List profiles cannot be evaluated
  /// pointwise and throw std::logic_error.
  double at(double x, std::uint64_t run_seed = 0) const;

  /// Samples n values; lattice callers use x_j = j/N (j = 1..N-1), the
  /// continuum uses cell centers. Random profiles draw n iid values.
  std::vector<double> sample(int n, const std::function<double(int)>& x_of_i,
                             std::uint64_t run_seed) const;
};

/// Parses the mini-language above. Throws std::invalid_argument on syntax
/// errors or out-of-range constants.
InitialProfile parse_profile(const std::string& text);

/// Interior lattice values u_1..u_{N-1} at x_j = j/N.
std::vector<double> lattice_values(const InitialProfile& p, int n_points,
                                   std::uint64_t run_seed);

/// Cell-centered continuum values at x_i = (i+1/2)/M.
std::vector<double> continuum_values(const InitialProfile& p, int m,
                                     std::uint64_t run_seed);

}  // namespace aggdiff
