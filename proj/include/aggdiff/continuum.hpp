#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aggdiff/model.hpp"

namespace aggdiff {

/// Cell-centered samples of u on [0,1]: cells[i] lives at x = (i+1/2)h,
/// h = 1/M. epsilon is the regularization added to the diffusivity.
struct ContinuumState {
  std::vector<double> cells;
  double h = 0.0;
  double epsilon = 0.0;
  double time = 0.0;

  ContinuumState() = default;
  ContinuumState(std::vector<double> cell_values, double eps, double t0 = 0.0);

  int m() const { return static_cast<int>(cells.size()); }
  double x_center(int i) const { return (i + 0.5) * h; }
};

/// Diagnostics recorded along a run. l2_to_mean is the squared L2 distance
/// to the spatial mean (the exponentially decaying quantity); gradients use
/// central differences with mirrored ghosts at the walls.
struct DiagnosticsSample {
  double time = 0.0;
  double mass = 0.0;         ///< integral of u
  double energy = 0.0;       ///< integral of u^2
  double weak_energy = 0.0;  ///< integral of u^2 + |D(u)| u_x^2
  double l2_to_mean = 0.0;   ///< integral of (u - mean)^2
  double max_gradient = 0.0;
};

DiagnosticsSample diagnostics(const ContinuumState& state,
                              const ModelFunctions& model = ModelFunctions::canonical());

/// Quadrature of u^2 + |D(u)| u_x^2 (midpoint rule, central gradients).
double weak_energy(const ContinuumState& state,
                   const ModelFunctions& model = ModelFunctions::canonical());

/// Largest admissible explicit step, h^2/(2 max_faces(D+eps)), or +inf when
/// no face is forward-diffusive (the backward regime has no stable step).
double stability_bound(const ContinuumState& state,
                       const ModelFunctions& model = ModelFunctions::canonical());

/// Automatic step: 0.4 h^2 / max_faces(D+eps); falls back to the largest
/// face magnitude when every face is backward.
double stable_dt(const ContinuumState& state,
                 const ModelFunctions& model = ModelFunctions::canonical());

/// One conservative explicit update. Face fluxes use the diffusivity at the
/// arithmetic average of the adjacent cells; both wall fluxes are zero, so
/// the discrete mass h*sum(u) is conserved to rounding.
/// Throws stability_error if dt exceeds the stability bound or a value
/// becomes non-finite.
ContinuumState pde_step(const ContinuumState& state, double dt,
                        const ModelFunctions& model = ModelFunctions::canonical());

/// Simulation output: diagnostics at the sampling cadence, optional state
/// snapshots at the same cadence, and the running spatial extrema over
/// every step taken (not just sampled ones).
struct PdeRunResult {
  std::vector<DiagnosticsSample> samples;
  ContinuumState final_state;
  std::vector<double> snapshot_times;
  std::vector<std::vector<double>> snapshots;
  double min_over_run = 0.0;
  double max_over_run = 0.0;
  std::int64_t steps = 0;
  bool diverged = false;          ///< probe runs only; adaptive runs throw
  double divergence_time = -1.0;  ///< -1 when the run stayed bounded
};

/// Advances to t_max with the automatic stable step, clipped so samples land
/// exactly on the cadence. keep_snapshots stores the full field each sample.
PdeRunResult pde_simulate(const ContinuumState& initial, double t_max,
                          double sample_every,
                          const ModelFunctions& model = ModelFunctions::canonical(),
                          bool keep_snapshots = false);

/// Fixed-step variant for sub-threshold (backward) experiments: dt is
/// chosen from the initial state only. Once any |u| exceeds divergence_cap
/// the run freezes (remaining snapshots repeat the blown state) and is
/// flagged diverged rather than throwing.
PdeRunResult pde_simulate_fixed_dt(const ContinuumState& initial, double t_max,
                                   double sample_every,
                                   const ModelFunctions& model = ModelFunctions::canonical(),
                                   bool keep_snapshots = false,
                                   double divergence_cap = 1e6);

/// Verdict of the spatial-minimum principle: the min over the whole run must
/// not drop below the initial min by more than 1e-10.
struct MinPrincipleResult {
  bool pass = false;
  double initial_min = 0.0;
  double run_min = 0.0;
};

MinPrincipleResult min_principle_check(const ContinuumState& initial,
                                       const PdeRunResult& run);

/// Smooth space-time bump, compactly supported in
/// (x_center +- x_radius) x (t_center +- t_radius), C^infinity.
struct SpaceTimeBump {
  double x_center = 0.5, x_radius = 0.3;
  double t_center = 0.0, t_radius = 1.0;

  double value(double x, double t) const;
  double ddx(double x, double t) const;
  double ddt(double x, double t) const;
};

/// Space-time quadrature of integral[ u phi_t - D(u) u_x phi_x ] over the
/// recorded snapshots (midpoint in x, trapezoid in t). Near zero for valid
/// solutions; refuses to shrink under refinement when no weak solution
/// exists. Requires a run with snapshots.
double weak_form_residual(std::span<const double> times,
                          std::span<const std::vector<double>> states,
                          double h, const SpaceTimeBump& phi,
                          const ModelFunctions& model = ModelFunctions::canonical());

/// One probe entry: a short fixed-step run of sub-threshold data recording
/// how fast gradients and the grid-scale (alternating) mode grow.
struct ProbeEntry {
  double epsilon = 0.0;
  int m = 0;
  double horizon = 0.0;
  double gradient_initial = 0.0;
  double gradient_final = 0.0;
  double gradient_growth = 0.0;
  double nyquist_initial = 0.0;
  double nyquist_final = 0.0;
  bool diverged = false;
  double divergence_time = -1.0;  ///< -1 when the run stayed bounded
};

struct IllposednessReport {
  std::vector<ProbeEntry> entries;
};

/// Runs every (epsilon, M) pair of the schedules on the given sub-threshold
/// initial profile over a fixed short horizon. Growth (divergence) is the
/// expected finding for backward-regime entries and is recorded, not thrown.
/// `profile` receives x in (0,1) and must return values strictly inside
/// (0, alpha) for the demonstration to be meaningful; constants are exact
/// solutions and show no growth.
IllposednessReport illposedness_probe(const std::function<double(double)>& profile,
                                      std::span<const double> epsilon_schedule,
                                      std::span<const int> m_schedule,
                                      double horizon,
                                      const ModelFunctions& model = ModelFunctions::canonical());

/// Cell-centered sampling helper.
ContinuumState make_state_from_profile(const std::function<double(double)>& profile,
                                       int m, double epsilon);

}  // namespace aggdiff
