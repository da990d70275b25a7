#include "aggdiff/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "aggdiff/errors.hpp"

namespace aggdiff {

namespace {

void check_band(double v, const char* context) {
  if (!(v >= -kBoundSlack && v <= 1.0 + kBoundSlack)) {
    throw invariant_violation(std::string(context) + ": value " +
                              std::to_string(v) + " left [0,1]");
  }
}

}  // namespace

LatticeState::LatticeState(std::vector<double> interior_values,
                           BoundaryCondition mode)
    : interior(std::move(interior_values)), bc(mode) {
  if (interior.empty())
    throw std::invalid_argument("lattice needs at least one interior point");
  for (double v : interior) {
    if (!(v >= -kBoundSlack && v <= 1.0 + kBoundSlack))
      throw std::domain_error("interior density " + std::to_string(v) +
                              " outside [0,1]");
  }
}

std::vector<double> LatticeState::with_ghosts() const {
  return extend_with_ghosts(interior, bc);
}

void lattice_step_into(std::span<const double> u, BoundaryCondition bc,
                       std::span<double> out) {
  const std::size_t n = u.size();
  const double ghost_left = bc == BoundaryCondition::NoFlux ? u[0] : 0.0;
  const double ghost_right = bc == BoundaryCondition::NoFlux ? u[n - 1] : 0.0;

  // Pairwise flux form: t_k = C(v_k, v_{k+1}) (v_{k+1} - v_k) over the
  // ghosted array, so the interior sum telescopes exactly. Both boundary
  // fluxes vanish identically (zero difference or zero coupling).
  double t_prev = detail::coupling_raw(ghost_left, u[0]) * (u[0] - ghost_left);
  for (std::size_t j = 0; j < n; ++j) {
    const double t_next =
        (j + 1 < n)
            ? detail::coupling_raw(u[j], u[j + 1]) * (u[j + 1] - u[j])
            : detail::coupling_raw(u[n - 1], ghost_right) * (ghost_right - u[n - 1]);
    const double v = u[j] + (t_next - t_prev);
    check_band(v, "lattice_step");
    out[j] = v;
    t_prev = t_next;
  }
}

LatticeState lattice_step(const LatticeState& state) {
  LatticeState next = state;
  lattice_step_into(state.interior, state.bc, next.interior);
  return next;
}

Trajectory simulate(const LatticeState& initial, std::int64_t max_steps,
                    double stop_tol, int stride) {
  if (max_steps < 0) throw std::invalid_argument("max_steps must be >= 0");
  if (!(stop_tol >= 0.0)) throw std::invalid_argument("stop_tol must be >= 0");
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");

  Trajectory traj;
  traj.stride = stride;
  traj.states.push_back(initial);
  traj.snapshot_steps.push_back(0);

  std::vector<double> cur = initial.interior;
  std::vector<double> next(cur.size());
  std::int64_t step = 0;
  bool converged = false;
  while (step < max_steps) {
    lattice_step_into(cur, initial.bc, next);
    ++step;
    double change = 0.0;
    for (std::size_t j = 0; j < cur.size(); ++j)
      change = std::max(change, std::abs(next[j] - cur[j]));
    cur.swap(next);
    const bool record = (step % stride == 0);
    if (record) {
      traj.states.emplace_back(cur, initial.bc);
      traj.snapshot_steps.push_back(step);
    }
    if (change < stop_tol) {
      converged = true;
      if (!record) {
        traj.states.emplace_back(cur, initial.bc);
        traj.snapshot_steps.push_back(step);
      }
      break;
    }
  }
  if (!converged && traj.snapshot_steps.back() != step) {
    traj.states.emplace_back(cur, initial.bc);
    traj.snapshot_steps.push_back(step);
  }
  traj.step_count = step;
  traj.converged = converged;
  return traj;
}

double interior_mass(const LatticeState& state) {
  double sum = 0.0;
  for (double v : state.interior) sum += v;
  return sum;
}

std::vector<double> step_differences(const LatticeState& state) {
  for (double v : state.interior) {
    if (v < 0.5)
      throw std::domain_error(
          "step_differences needs all values in [1/2,1]; got " +
          std::to_string(v));
  }
  const std::vector<double> v = state.with_ghosts();
  const std::size_t np = v.size();  // N+1 points, indices 0..N

  // Pair couplings c[k] for (v_k, v_{k+1}) and differences d[k] = v_{k+1}-v_k.
  std::vector<double> c(np - 1), d(np - 1);
  for (std::size_t k = 0; k + 1 < np; ++k) {
    c[k] = detail::coupling_raw(v[k], v[k + 1]);
    d[k] = v[k + 1] - v[k];
  }

  // Interior differences are indices 1..N-2 of d; each row is
  // (c_{k-1}, 1 - 2 c_k, c_{k+1}). The boundary-difference terms are kept
  // for the record; they are exactly zero under both boundary modes.
  std::vector<double> out;
  out.reserve(state.interior.size() - 1);
  for (std::size_t k = 1; k + 1 < np - 1; ++k) {
    out.push_back(c[k - 1] * d[k - 1] + (1.0 - 2.0 * c[k]) * d[k] +
                  c[k + 1] * d[k + 1]);
  }
  return out;
}

}  // namespace aggdiff
