#include "aggdiff/regions.hpp"

#include <random>

#include "aggdiff/rng.hpp"
#include "doctest.h"

using namespace aggdiff;

TEST_CASE("threshold partition is inclusive at one half") {
  const LatticeState s({0.3, 0.5, 0.8}, BoundaryCondition::NoFlux);
  const RegionPartition part = forward_region(s);
  CHECK(part.forward == std::vector<int>{2, 3});
  CHECK(part.backward == std::vector<int>{1});
}

TEST_CASE("partition extremes") {
  const LatticeState hi({0.5, 0.9, 0.61}, BoundaryCondition::NoFlux);
  CHECK(forward_region(hi).forward == std::vector<int>{1, 2, 3});
  CHECK(forward_region(hi).backward.empty());
  const LatticeState lo({0.49, 0.1}, BoundaryCondition::Hostile);
  CHECK(forward_region(lo).forward.empty());
  CHECK(forward_region(lo).backward == std::vector<int>{1, 2});
}

TEST_CASE("partition cardinalities always cover the interior") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = uniform_int(rng, 1, 64);
    std::vector<double> u(static_cast<std::size_t>(n));
    for (auto& v : u) v = uniform(rng, 0.0, 1.0);
    const LatticeState s(u, BoundaryCondition::NoFlux);
    const RegionPartition part = forward_region(s);
    REQUIRE(part.forward.size() + part.backward.size() ==
            static_cast<std::size_t>(n));
  }
}

TEST_CASE("constant trajectory passes the growth check") {
  const LatticeState s({0.6, 0.6, 0.6}, BoundaryCondition::NoFlux);
  const Trajectory traj = simulate(s, 50, 0.0);
  CHECK(check_region_monotone(traj).pass);
}

TEST_CASE("random trajectories keep the forward region growing") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = uniform_int(rng, 1, 48);
    std::vector<double> u(static_cast<std::size_t>(n));
    for (auto& v : u) v = uniform(rng, 0.0, 1.0);
    const BoundaryCondition bc = (rng() & 1) ? BoundaryCondition::NoFlux
                                             : BoundaryCondition::Hostile;
    const Trajectory traj = simulate(LatticeState(u, bc), 500, 0.0);
    REQUIRE(check_region_monotone(traj).pass);
  }
}

TEST_CASE("hostile run keeps the middle site in the forward region") {
  const Trajectory traj = simulate(
      LatticeState({0.4, 0.7, 0.2}, BoundaryCondition::Hostile), 5000, 0.0, 10);
  for (const auto& state : traj.states) CHECK(state.interior[1] >= 0.5);
  CHECK(check_region_monotone(traj).pass);
}

TEST_CASE("a hand-built shrinking region is detected") {
  Trajectory traj;
  traj.states.emplace_back(std::vector<double>{0.6, 0.7},
                           BoundaryCondition::NoFlux);
  traj.states.emplace_back(std::vector<double>{0.4, 0.7},
                           BoundaryCondition::NoFlux);
  traj.snapshot_steps = {0, 1};
  traj.step_count = 1;
  const RegionMonotoneResult res = check_region_monotone(traj);
  CHECK_FALSE(res.pass);
  CHECK(res.first_violation_step == 1);
}

TEST_CASE("monotone profile detection") {
  const LatticeState up({0.5, 0.6, 0.9}, BoundaryCondition::NoFlux);
  CHECK(is_monotone_profile(up).monotone);
  CHECK(is_monotone_profile(up).nondecreasing);
  CHECK_FALSE(is_monotone_profile(up).nonincreasing);

  const LatticeState mixed({0.9, 0.6, 0.7}, BoundaryCondition::NoFlux);
  CHECK_FALSE(is_monotone_profile(mixed).monotone);

  const LatticeState flat({0.4, 0.4}, BoundaryCondition::NoFlux);
  const MonotoneProfile m = is_monotone_profile(flat);
  CHECK(m.monotone);
  CHECK(m.nondecreasing);
  CHECK(m.nonincreasing);
}

TEST_CASE("spread basics and decay along band trajectories") {
  CHECK(spread(LatticeState({0.7, 0.7, 0.7}, BoundaryCondition::NoFlux)) == 0.0);
  CHECK(spread(LatticeState({0.5, 1.0}, BoundaryCondition::NoFlux)) == 0.5);

  LatticeState s({0.52, 0.9, 0.66, 0.71}, BoundaryCondition::NoFlux);
  double prev = spread(s);
  for (int step = 0; step < 200; ++step) {
    s = lattice_step(s);
    const double sp = spread(s);
    REQUIRE(sp <= prev + 1e-14);
    prev = sp;
  }
}
