#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aggdiff/model.hpp"

namespace aggdiff {

/// Interior densities u_1..u_{N-1} of an N-point lattice plus the boundary
/// mode that fixes the ghost entries u_0 and u_N.
///
/// Values are validated into [0,1] with kBoundSlack rounding slack; inputs
/// outside that band are hard errors, never clamped.
struct LatticeState {
  std::vector<double> interior;
  BoundaryCondition bc = BoundaryCondition::NoFlux;

  LatticeState() = default;
  LatticeState(std::vector<double> interior_values, BoundaryCondition mode);

  /// Number of lattice points N (interior has N-1 entries).
  int n_points() const { return static_cast<int>(interior.size()) + 1; }

  /// Interior values with ghost entries attached (length N+1).
  std::vector<double> with_ghosts() const;
};

/// Time-indexed snapshots of a simulation. Snapshots are `stride` steps
/// apart except for the final state, which is always recorded. With
/// stride 1 consecutive snapshots are related by exactly one lattice_step.
struct Trajectory {
  std::vector<LatticeState> states;
  std::vector<std::int64_t> snapshot_steps;
  std::int64_t step_count = 0;
  bool converged = false;
  int stride = 1;

  const LatticeState& initial() const { return states.front(); }
  const LatticeState& final_state() const { return states.back(); }
};

/// One synchronous application of the update
///   u_j <- u_j + C(u_j,u_{j-1})(u_{j-1}-u_j) + C(u_j,u_{j+1})(u_{j+1}-u_j)
/// with ghost values from the boundary mode. The interior sum is conserved
/// to rounding under both boundary modes and every output stays in [0,1];
/// an output outside [-kBoundSlack, 1+kBoundSlack] throws
/// invariant_violation (it would falsify the boundedness theorem).
LatticeState lattice_step(const LatticeState& state);

/// Allocation-free core of lattice_step: writes the next interior values
/// into `out` (may not alias `u`). Throws invariant_violation as above.
void lattice_step_into(std::span<const double> u, BoundaryCondition bc,
                       std::span<double> out);

/// Iterates lattice_step until the max-norm successive change drops below
/// stop_tol or max_steps is reached. Snapshots every `stride` steps.
Trajectory simulate(const LatticeState& initial, std::int64_t max_steps,
                    double stop_tol, int stride = 1);

/// Sum of the interior values (the conserved quantity).
double interior_mass(const LatticeState& state);

/// Next-step interior differences u_{j+1}-u_j (length N-2) computed via the
/// tridiagonal coefficient rows (C_{j-1}, 1-2 C_j, C_{j+1}) acting on the
/// current difference vector, where C_j couples the pair (j, j+1).
///
/// Valid in the diffusion regime only: throws std::domain_error if any
/// interior value is below 1/2 (the coefficient matrix is entrywise
/// nonnegative only there). Agrees with differencing lattice_step output
/// to ~1e-15 but follows an independent arithmetic route.
std::vector<double> step_differences(const LatticeState& state);

}  // namespace aggdiff
