#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aggdiff/lattice.hpp"

namespace aggdiff {

/// Long-time outcome families for the N=4 lattice under hostile boundaries
/// (interior u1,u2,u3, ghosts pinned to zero).
enum class CaseLabel {
  Case1, Case2, Case3, Case4, Case5, Case6, Case7, Case8, Case9, Case10,
  Undetermined,
};

const char* to_string(CaseLabel label);

enum class Verdict { Match, Mismatch, Open };

const char* to_string(Verdict v);

/// Evidence gathered when a trajectory does not settle: envelopes over the
/// trailing window plus a period candidate from the autocorrelation of the
/// u2 series (0 means no credible period).
struct OscillationDiagnostics {
  std::array<double, 3> env_min{};
  std::array<double, 3> env_max{};
  std::int64_t window_steps = 0;
  std::int64_t period_candidate = 0;
  double period_score = 0.0;
};

/// Classification and (optionally) verification outcome for one triple.
struct CaseReport {
  std::array<double, 3> initial{};
  CaseLabel label = CaseLabel::Undetermined;
  std::string sub_branch;  ///< which branch of the case fired, "" if none
  bool open = false;       ///< no settled prediction exists for this branch

  /// Numeric limit when one is predicted; mirror-symmetric inputs get the
  /// reflected prediction.
  std::optional<std::array<double, 3>> predicted_limit;
  /// Human-readable statement of the predicted long-time behavior.
  std::string predicted_structure;

  // Filled by verify_n4:
  std::optional<std::array<double, 3>> empirical_limit;
  std::optional<Verdict> verdict;
  bool converged = false;
  std::int64_t steps_used = 0;
  double final_change = 0.0;
  std::optional<OscillationDiagnostics> oscillation;
};

/// Convergence detection over recorded snapshots: converged iff every
/// snapshot-to-snapshot max-norm change inside the trailing `window` steps
/// is below tol.
struct ConvergenceResult {
  bool converged = false;
  std::optional<std::vector<double>> limit;
  std::int64_t steps_used = 0;
  double final_change = 0.0;
};

ConvergenceResult detect_convergence(const Trajectory& traj, double tol,
                                     std::int64_t window);

/// Proven limit for monotone no-flux data in the diffusion regime: the
/// interior mean. Throws std::domain_error when the hypotheses (no-flux,
/// monotone, all values in [1/2,1]) fail.
double predicted_limit_monotone(const LatticeState& state);

/// Classifies an initial triple (hostile boundary implied) and attaches the
/// predicted long-time behavior where one is known.
///
/// Predicate order: exact-equality steady states first (Case 9, then Case 6's
/// u1 == u3), then cases in numerical order, with each predicate also tested
/// on the reflected triple so mirror-symmetric inputs land in the same case.
/// Equality comparisons are exact floating-point comparisons; callers should
/// pass intent-exact values. Triples on predicate boundaries not covered by
/// any case are labeled Undetermined and reported as open.
///
/// Throws std::domain_error outside [0,1]^3.
CaseReport classify_n4(double u1, double u2, double u3);

/// Runs the hostile-boundary simulation and compares against the
/// classification's prediction. Match accepts the primary predicted limit or,
/// for the branches whose analysis is conditional on an ordering that the
/// dynamics may break (Cases 4 and 5), the documented fallback outcome the
/// analysis redirects to. Open branches report the empirical outcome
/// (limit, or oscillation diagnostics) without asserting.
CaseReport verify_n4(double u1, double u2, double u3, std::int64_t max_steps,
                     double tol);

/// Least-squares slope of log(v) against t. Negative means decay.
/// Requires >= 3 points with v > 0 (std::domain_error otherwise) and not all
/// t equal (std::invalid_argument).
double fit_decay_rate(std::span<const std::pair<double, double>> series);

}  // namespace aggdiff
