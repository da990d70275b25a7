#include "aggdiff/lattice.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "aggdiff/errors.hpp"
#include "aggdiff/regions.hpp"
#include "aggdiff/rng.hpp"
#include "doctest.h"

using namespace aggdiff;

namespace {

// Independent oracle: literal per-site evaluation of the update over the
// ghost-extended array, written without the flux pairing used by the
// production stepper.
std::vector<double> oracle_step(const std::vector<double>& interior,
                                BoundaryCondition bc) {
  const std::vector<double> v = extend_with_ghosts(interior, bc);
  std::vector<double> out(interior.size());
  for (std::size_t j = 1; j + 1 < v.size(); ++j) {
    const double left =
        (v[j] * v[j - 1] / 2.0) * (v[j] + v[j - 1] - 1.0) * (v[j - 1] - v[j]);
    const double right =
        (v[j] * v[j + 1] / 2.0) * (v[j] + v[j + 1] - 1.0) * (v[j + 1] - v[j]);
    out[j - 1] = v[j] + left + right;
  }
  return out;
}

}  // namespace

TEST_CASE("state validation") {
  CHECK_THROWS_AS(LatticeState({}, BoundaryCondition::NoFlux),
                  std::invalid_argument);
  CHECK_THROWS_AS(LatticeState({0.5, 1.2}, BoundaryCondition::NoFlux),
                  std::domain_error);
  CHECK_THROWS_AS(LatticeState({-0.1}, BoundaryCondition::Hostile),
                  std::domain_error);
  const LatticeState s({0.4, 0.7, 0.2}, BoundaryCondition::Hostile);
  CHECK(s.n_points() == 4);
}

TEST_CASE("constant profiles are fixed points") {
  const LatticeState s({0.37, 0.37, 0.37}, BoundaryCondition::NoFlux);
  CHECK(lattice_step(s).interior == s.interior);
  // Hostile ghosts carry zero coupling, so constants are fixed there too.
  const LatticeState h({0.37, 0.37, 0.37}, BoundaryCondition::Hostile);
  CHECK(lattice_step(h).interior == h.interior);
}

TEST_CASE("hand-checked hostile step") {
  const LatticeState s({0.4, 0.7, 0.2}, BoundaryCondition::Hostile);
  const LatticeState next = lattice_step(s);
  CHECK(next.interior[0] == doctest::Approx(0.4042).epsilon(1e-12));
  CHECK(next.interior[1] == doctest::Approx(0.6993).epsilon(1e-12));
  CHECK(next.interior[2] == doctest::Approx(0.1965).epsilon(1e-12));
  CHECK(interior_mass(next) == doctest::Approx(1.3).epsilon(1e-14));
}

TEST_CASE("half-density hostile profile is a fixed point") {
  // Every coupling carries the factor u_j + u_neighbor - 1 = 0 or a zero
  // difference, so the update is exact identity.
  const LatticeState s({0.5, 0.5, 0.5}, BoundaryCondition::Hostile);
  CHECK(lattice_step(s).interior == s.interior);
}

TEST_CASE("zero-coupling steady family is fixed to machine precision") {
  // u1 + u2 = 1 with u2 = u3 kills both couplings.
  const LatticeState s({0.3, 0.7, 0.7}, BoundaryCondition::Hostile);
  CHECK(lattice_step(s).interior == s.interior);
  const LatticeState m({0.2, 0.2, 0.8}, BoundaryCondition::Hostile);
  CHECK(lattice_step(m).interior == m.interior);
}

TEST_CASE("stepper agrees with the literal oracle") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = uniform_int(rng, 1, 32);
    std::vector<double> u(static_cast<std::size_t>(n));
    for (auto& x : u) x = uniform(rng, 0.0, 1.0);
    const BoundaryCondition bc = (rng() & 1) ? BoundaryCondition::NoFlux
                                             : BoundaryCondition::Hostile;
    const LatticeState s(u, bc);
    const std::vector<double> want = oracle_step(u, bc);
    const std::vector<double> got = lattice_step(s).interior;
    for (std::size_t j = 0; j < got.size(); ++j)
      REQUIRE(std::abs(got[j] - want[j]) <= 1e-15);
  }
}

TEST_CASE("mass is conserved and values stay bounded") {
  std::mt19937_64 rng(57);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = uniform_int(rng, 1, 48);
    std::vector<double> u(static_cast<std::size_t>(n));
    for (auto& x : u) x = uniform(rng, 0.0, 1.0);
    const BoundaryCondition bc = (rng() & 1) ? BoundaryCondition::NoFlux
                                             : BoundaryCondition::Hostile;
    LatticeState s(u, bc);
    const double m0 = interior_mass(s);
    for (int step = 0; step < 200; ++step) {
      s = lattice_step(s);
      REQUIRE(std::abs(interior_mass(s) - m0) <= 1e-13 * std::max(1.0, m0));
      for (double v : s.interior) {
        REQUIRE(v >= -kBoundSlack);
        REQUIRE(v <= 1.0 + kBoundSlack);
      }
    }
  }
}

TEST_CASE("diffusion-band extrema contract monotonically") {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = uniform_int(rng, 2, 24);
    std::vector<double> u(static_cast<std::size_t>(n));
    for (auto& x : u) x = uniform(rng, 0.5, 1.0);
    LatticeState s(u, BoundaryCondition::NoFlux);
    for (int step = 0; step < 400; ++step) {
      const auto [lo0, hi0] =
          std::minmax_element(s.interior.begin(), s.interior.end());
      const double mn = *lo0, mx = *hi0;
      s = lattice_step(s);
      const auto [lo1, hi1] =
          std::minmax_element(s.interior.begin(), s.interior.end());
      REQUIRE(*lo1 >= mn - 1e-14);
      REQUIRE(*hi1 <= mx + 1e-14);
    }
  }
}

TEST_CASE("monotone diffusion-band profiles stay monotone") {
  std::mt19937_64 rng(93);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = uniform_int(rng, 2, 24);
    std::vector<double> u(static_cast<std::size_t>(n));
    for (auto& x : u) x = uniform(rng, 0.5, 1.0);
    std::sort(u.begin(), u.end());
    if (rng() & 1) std::reverse(u.begin(), u.end());
    LatticeState s(u, BoundaryCondition::NoFlux);
    const bool up = is_monotone_profile(s).nondecreasing;
    for (int step = 0; step < 300; ++step) {
      s = lattice_step(s);
      const MonotoneProfile m = is_monotone_profile(s);
      REQUIRE(m.monotone);
      if (up)
        REQUIRE(m.nondecreasing);
      else
        REQUIRE(m.nonincreasing);
    }
  }
}

TEST_CASE("difference-vector route matches the direct stepper") {
  std::mt19937_64 rng(131);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = uniform_int(rng, 2, 48);
    std::vector<double> u(static_cast<std::size_t>(n));
    for (auto& x : u) x = uniform(rng, 0.5, 1.0);
    const BoundaryCondition bc = (rng() & 1) ? BoundaryCondition::NoFlux
                                             : BoundaryCondition::Hostile;
    const LatticeState s(u, bc);
    const std::vector<double> diffs = step_differences(s);
    REQUIRE(diffs.size() == u.size() - 1);
    const LatticeState next = lattice_step(s);
    for (std::size_t j = 0; j + 1 < u.size(); ++j) {
      const double direct = next.interior[j + 1] - next.interior[j];
      REQUIRE(std::abs(direct - diffs[j]) <= 1e-14);
    }
  }
}

TEST_CASE("difference route refuses the aggregation regime") {
  const LatticeState s({0.4, 0.7, 0.6}, BoundaryCondition::NoFlux);
  CHECK_THROWS_AS(step_differences(s), std::domain_error);
}

TEST_CASE("constant state gives a zero difference vector") {
  const LatticeState s({0.7, 0.7, 0.7, 0.7}, BoundaryCondition::NoFlux);
  for (double d : step_differences(s)) CHECK(d == 0.0);
}

TEST_CASE("monotone nondecreasing differences stay nonnegative") {
  const LatticeState s({0.5, 0.62, 0.77, 0.9}, BoundaryCondition::NoFlux);
  for (double d : step_differences(s)) CHECK(d >= 0.0);
}

TEST_CASE("simulate stops immediately on constant data") {
  const LatticeState s({0.6, 0.6, 0.6, 0.6, 0.6, 0.6, 0.6},
                       BoundaryCondition::NoFlux);
  const Trajectory traj = simulate(s, 1000, 1e-12);
  CHECK(traj.converged);
  CHECK(traj.step_count == 1);  // one step to observe the zero change
  CHECK(traj.final_state().interior == s.interior);
}

TEST_CASE("simulate reaches the interior mean for monotone band data") {
  const LatticeState s({0.55, 0.7, 0.9}, BoundaryCondition::NoFlux);
  const Trajectory traj = simulate(s, 2000000, 1e-12);
  CHECK(traj.converged);
  const double mean = interior_mass(s) / 3.0;
  for (double v : traj.final_state().interior)
    CHECK(v == doctest::Approx(mean).epsilon(1e-8));
}

TEST_CASE("hostile long run isolates the sub-threshold end") {
  const LatticeState s({0.4, 0.7, 0.2}, BoundaryCondition::Hostile);
  const Trajectory traj = simulate(s, 1000000, 1e-13);
  CHECK(traj.converged);
  const auto& fin = traj.final_state().interior;
  CHECK(fin[2] <= 1e-8);
  CHECK(std::abs(fin[0] - fin[1]) <= 1e-8);
  CHECK(fin[0] > 0.5);
  CHECK(interior_mass(traj.final_state()) ==
        doctest::Approx(1.3).epsilon(1e-12));
}

TEST_CASE("snapshot stride records the final state") {
  const LatticeState s({0.51, 0.83, 0.64, 0.72}, BoundaryCondition::NoFlux);
  const Trajectory traj = simulate(s, 1000, 0.0, 7);
  CHECK(traj.stride == 7);
  CHECK(traj.snapshot_steps.front() == 0);
  CHECK(traj.snapshot_steps.back() == 1000);
  for (std::size_t i = 1; i + 1 < traj.snapshot_steps.size(); ++i)
    CHECK(traj.snapshot_steps[i] == static_cast<std::int64_t>(i) * 7);
}
