#include "aggdiff/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "aggdiff/errors.hpp"

namespace aggdiff {

namespace {

constexpr double kSafety = 0.4;

/// Central-difference gradient; wall cells use mirrored ghosts, consistent
/// with the zero-flux boundary.
void gradient_into(std::span<const double> u, double h, std::span<double> g) {
  const std::size_t m = u.size();
  if (m == 1) {
    g[0] = 0.0;
    return;
  }
  g[0] = (u[1] - u[0]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < m; ++i) g[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
  g[m - 1] = (u[m - 1] - u[m - 2]) / (2.0 * h);
}

/// One conservative update with precomputed dt. No validity checks.
void flux_step_into(std::span<const double> u, double h, double eps, double dt,
                    const ModelFunctions& model, std::span<double> out) {
  const std::size_t m = u.size();
  const double r = dt / h;
  double flux_prev = 0.0;  // wall
  for (std::size_t i = 0; i < m; ++i) {
    double flux_next = 0.0;
    if (i + 1 < m) {
      const double mid = 0.5 * (u[i] + u[i + 1]);
      flux_next = (model.diffusivity(mid) + eps) * (u[i + 1] - u[i]) / h;
    }
    out[i] = u[i] + r * (flux_next - flux_prev);
    flux_prev = flux_next;
  }
}

double max_forward_face(std::span<const double> u, double eps,
                        const ModelFunctions& model) {
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double mid = 0.5 * (u[i] + u[i + 1]);
    mx = std::max(mx, model.diffusivity(mid) + eps);
  }
  return mx;
}

double max_abs_face(std::span<const double> u, double eps,
                    const ModelFunctions& model) {
  double mx = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double mid = 0.5 * (u[i] + u[i + 1]);
    mx = std::max(mx, std::abs(model.diffusivity(mid) + eps));
  }
  return mx;
}

double nyquist_amplitude(std::span<const double> u) {
  double acc = 0.0;
  double sign = 1.0;
  for (double v : u) {
    acc += sign * v;
    sign = -sign;
  }
  return std::abs(acc) * 2.0 / static_cast<double>(u.size());
}

double bump_profile(double s) {
  const double s2 = s * s;
  if (s2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s2));
}

double bump_profile_derivative(double s) {
  const double s2 = s * s;
  if (s2 >= 1.0) return 0.0;
  const double d = 1.0 - s2;
  return std::exp(1.0 - 1.0 / d) * (-2.0 * s / (d * d));
}

}  // namespace

ContinuumState::ContinuumState(std::vector<double> cell_values, double eps,
                               double t0)
    : cells(std::move(cell_values)), epsilon(eps), time(t0) {
  if (cells.size() < 2)
    throw std::invalid_argument("continuum grid needs at least 2 cells");
  if (!(epsilon >= 0.0))
    throw std::invalid_argument("regularization must be >= 0");
  for (double v : cells)
    if (!std::isfinite(v))
      throw std::invalid_argument("cell values must be finite");
  h = 1.0 / static_cast<double>(cells.size());
}

DiagnosticsSample diagnostics(const ContinuumState& state,
                              const ModelFunctions& model) {
  DiagnosticsSample d;
  d.time = state.time;
  const auto& u = state.cells;
  const double h = state.h;
  std::vector<double> g(u.size());
  gradient_into(u, h, g);
  double mass = 0.0;
  for (double v : u) mass += v;
  mass *= h;
  d.mass = mass;
  double energy = 0.0, weak = 0.0, l2 = 0.0, gmax = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    energy += u[i] * u[i];
    weak += u[i] * u[i] + std::abs(model.diffusivity(u[i])) * g[i] * g[i];
    const double dm = u[i] - mass;  // domain length 1: mean == mass
    l2 += dm * dm;
    gmax = std::max(gmax, std::abs(g[i]));
  }
  d.energy = energy * h;
  d.weak_energy = weak * h;
  d.l2_to_mean = l2 * h;
  d.max_gradient = gmax;
  return d;
}

double weak_energy(const ContinuumState& state, const ModelFunctions& model) {
  return diagnostics(state, model).weak_energy;
}

double stability_bound(const ContinuumState& state,
                       const ModelFunctions& model) {
  const double mx = max_forward_face(state.cells, state.epsilon, model);
  if (mx <= 0.0) return std::numeric_limits<double>::infinity();
  return state.h * state.h / (2.0 * mx);
}

double stable_dt(const ContinuumState& state, const ModelFunctions& model) {
  double denom = max_forward_face(state.cells, state.epsilon, model);
  if (denom <= 0.0) denom = max_abs_face(state.cells, state.epsilon, model);
  if (denom <= 0.0) denom = 1e-30;  // constant state: any dt is a no-op
  return kSafety * state.h * state.h / denom;
}

ContinuumState pde_step(const ContinuumState& state, double dt,
                        const ModelFunctions& model) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  const double bound = stability_bound(state, model);
  if (dt > bound * (1.0 + 1e-12))
    throw stability_error("dt " + std::to_string(dt) +
                          " exceeds the stability bound " + std::to_string(bound));
  ContinuumState next = state;
  flux_step_into(state.cells, state.h, state.epsilon, dt, model, next.cells);
  for (double v : next.cells)
    if (!std::isfinite(v))
      throw stability_error("solution value became non-finite");
  next.time = state.time + dt;
  return next;
}

namespace {

PdeRunResult simulate_impl(const ContinuumState& initial, double t_max,
                           double sample_every, const ModelFunctions& model,
                           bool keep_snapshots, bool fixed_dt,
                           double divergence_cap) {
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be > 0");
  if (!(sample_every > 0.0))
    throw std::invalid_argument("sample_every must be > 0");

  PdeRunResult res;
  ContinuumState state = initial;
  const double dt0 = stable_dt(state, model);

  const auto record = [&](const ContinuumState& s) {
    res.samples.push_back(diagnostics(s, model));
    if (keep_snapshots) {
      res.snapshot_times.push_back(s.time);
      res.snapshots.push_back(s.cells);
    }
  };

  res.min_over_run = *std::min_element(state.cells.begin(), state.cells.end());
  res.max_over_run = *std::max_element(state.cells.begin(), state.cells.end());
  record(state);

  ContinuumState next = state;
  bool frozen = false;
  double next_sample = sample_every;
  const double t_end = initial.time + t_max;
  while (state.time < t_end - 1e-14) {
    const double target = std::min(initial.time + next_sample, t_end);
    while (!frozen && state.time < target - 1e-14) {
      double dt = fixed_dt ? dt0 : stable_dt(state, model);
      dt = std::min(dt, target - state.time);
      flux_step_into(state.cells, state.h, state.epsilon, dt, model,
                     next.cells);
      next.time = state.time + dt;
      std::swap(state.cells, next.cells);
      state.time = next.time;
      ++res.steps;
      double lo = state.cells[0], hi = state.cells[0];
      bool finite = true;
      for (double v : state.cells) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        finite = finite && std::isfinite(v);
      }
      if (!finite || std::max(std::abs(lo), std::abs(hi)) > divergence_cap) {
        if (!fixed_dt) throw stability_error("solution diverged");
        res.diverged = true;
        res.divergence_time = state.time;
        frozen = true;  // keep the blown state; stop advancing
        break;
      }
      res.min_over_run = std::min(res.min_over_run, lo);
      res.max_over_run = std::max(res.max_over_run, hi);
    }
    state.time = frozen ? state.time : target;
    record(state);
    if (target >= t_end - 1e-14) break;
    next_sample += sample_every;
  }
  res.final_state = state;
  return res;
}

}  // namespace

PdeRunResult pde_simulate(const ContinuumState& initial, double t_max,
                          double sample_every, const ModelFunctions& model,
                          bool keep_snapshots) {
  return simulate_impl(initial, t_max, sample_every, model, keep_snapshots,
                       /*fixed_dt=*/false,
                       /*divergence_cap=*/std::numeric_limits<double>::infinity());
}

PdeRunResult pde_simulate_fixed_dt(const ContinuumState& initial, double t_max,
                                   double sample_every,
                                   const ModelFunctions& model,
                                   bool keep_snapshots, double divergence_cap) {
  return simulate_impl(initial, t_max, sample_every, model, keep_snapshots,
                       /*fixed_dt=*/true, divergence_cap);
}

MinPrincipleResult min_principle_check(const ContinuumState& initial,
                                       const PdeRunResult& run) {
  MinPrincipleResult res;
  res.initial_min =
      *std::min_element(initial.cells.begin(), initial.cells.end());
  res.run_min = run.min_over_run;
  res.pass = res.run_min >= res.initial_min - 1e-10;
  return res;
}

double SpaceTimeBump::value(double x, double t) const {
  return bump_profile((x - x_center) / x_radius) *
         bump_profile((t - t_center) / t_radius);
}

double SpaceTimeBump::ddx(double x, double t) const {
  return bump_profile_derivative((x - x_center) / x_radius) / x_radius *
         bump_profile((t - t_center) / t_radius);
}

double SpaceTimeBump::ddt(double x, double t) const {
  return bump_profile((x - x_center) / x_radius) *
         bump_profile_derivative((t - t_center) / t_radius) / t_radius;
}

double weak_form_residual(std::span<const double> times,
                          std::span<const std::vector<double>> states,
                          double h, const SpaceTimeBump& phi,
                          const ModelFunctions& model) {
  if (times.size() != states.size() || times.size() < 2)
    throw std::invalid_argument("residual needs >= 2 matching snapshots");
  std::vector<double> slice(times.size());
  std::vector<double> g(states[0].size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto& u = states[k];
    const double t = times[k];
    gradient_into(u, h, g);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double x = (static_cast<double>(i) + 0.5) * h;
      acc += u[i] * phi.ddt(x, t) -
             model.diffusivity(u[i]) * g[i] * phi.ddx(x, t);
    }
    slice[k] = acc * h;
  }
  // Trapezoid in time; snapshot times may be nonuniform at the tail.
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < times.size(); ++k)
    integral += 0.5 * (slice[k] + slice[k + 1]) * (times[k + 1] - times[k]);
  return std::abs(integral);
}

ContinuumState make_state_from_profile(
    const std::function<double(double)>& profile, int m, double epsilon) {
  if (m < 2) throw std::invalid_argument("grid needs at least 2 cells");
  std::vector<double> cells(static_cast<std::size_t>(m));
  const double h = 1.0 / m;
  for (int i = 0; i < m; ++i) cells[static_cast<std::size_t>(i)] =
      profile((static_cast<double>(i) + 0.5) * h);
  return ContinuumState(std::move(cells), epsilon);
}

IllposednessReport illposedness_probe(
    const std::function<double(double)>& profile,
    std::span<const double> epsilon_schedule, std::span<const int> m_schedule,
    double horizon, const ModelFunctions& model) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  IllposednessReport report;
  for (const int m : m_schedule) {
    for (const double eps : epsilon_schedule) {
      const ContinuumState s0 = make_state_from_profile(profile, m, eps);
      ProbeEntry e;
      e.epsilon = eps;
      e.m = m;
      e.horizon = horizon;
      const DiagnosticsSample d0 = diagnostics(s0, model);
      e.gradient_initial = d0.max_gradient;
      e.nyquist_initial = nyquist_amplitude(s0.cells);
      const PdeRunResult run =
          pde_simulate_fixed_dt(s0, horizon, horizon, model,
                                /*keep_snapshots=*/false);
      const DiagnosticsSample dT = diagnostics(run.final_state, model);
      e.gradient_final = dT.max_gradient;
      e.gradient_growth =
          e.gradient_initial > 0.0 ? e.gradient_final / e.gradient_initial
                                   : e.gradient_final;
      e.nyquist_final = nyquist_amplitude(run.final_state.cells);
      e.diverged = run.diverged;
      e.divergence_time = run.divergence_time;
      report.entries.push_back(e);
    }
  }
  return report;
}

}  // namespace aggdiff
