#pragma once

#include <cstdint>
#include <vector>

#include "aggdiff/lattice.hpp"

namespace aggdiff {

/// Split of the interior indices (1-based, j = 1..N-1) into the forward
/// (diffusion, u >= 1/2) and backward (aggregation, u < 1/2) regions.
/// The threshold comparison is inclusive on the forward side and uses the
/// raw value; no epsilon band.
struct RegionPartition {
  std::vector<int> forward;
  std::vector<int> backward;
};

RegionPartition forward_region(const LatticeState& state);

/// Result of checking that the forward region only grows along a
/// trajectory. A failed check is a verdict, not an error.
struct RegionMonotoneResult {
  bool pass = true;
  std::int64_t first_violation_step = -1;  ///< step of the later snapshot
};

/// Verifies forward(t) is a subset of forward(t') for every consecutive
/// recorded snapshot pair t < t'. With stride > 1 the inclusion between
/// recorded snapshots is implied by transitivity and still checked.
RegionMonotoneResult check_region_monotone(const Trajectory& traj);

struct MonotoneProfile {
  bool monotone = false;
  bool nondecreasing = false;
  bool nonincreasing = false;  ///< constant profiles set both directions
};

MonotoneProfile is_monotone_profile(const LatticeState& state);

/// max - min over the interior values.
double spread(const LatticeState& state);

}  // namespace aggdiff
