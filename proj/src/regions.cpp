#include "aggdiff/regions.hpp"

#include <algorithm>

namespace aggdiff {

RegionPartition forward_region(const LatticeState& state) {
  RegionPartition part;
  for (std::size_t i = 0; i < state.interior.size(); ++i) {
    const int j = static_cast<int>(i) + 1;
    if (state.interior[i] >= 0.5)
      part.forward.push_back(j);
    else
      part.backward.push_back(j);
  }
  return part;
}

RegionMonotoneResult check_region_monotone(const Trajectory& traj) {
  RegionMonotoneResult res;
  for (std::size_t s = 0; s + 1 < traj.states.size(); ++s) {
    const auto& a = traj.states[s].interior;
    const auto& b = traj.states[s + 1].interior;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] >= 0.5 && !(b[i] >= 0.5)) {
        res.pass = false;
        res.first_violation_step = traj.snapshot_steps[s + 1];
        return res;
      }
    }
  }
  return res;
}

MonotoneProfile is_monotone_profile(const LatticeState& state) {
  MonotoneProfile m;
  m.nondecreasing = true;
  m.nonincreasing = true;
  const auto& u = state.interior;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    if (u[i + 1] < u[i]) m.nondecreasing = false;
    if (u[i + 1] > u[i]) m.nonincreasing = false;
  }
  m.monotone = m.nondecreasing || m.nonincreasing;
  return m;
}

double spread(const LatticeState& state) {
  const auto [lo, hi] =
      std::minmax_element(state.interior.begin(), state.interior.end());
  return *hi - *lo;
}

}  // namespace aggdiff
