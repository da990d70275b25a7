#include "aggdiff/asymptotics.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "aggdiff/rng.hpp"
#include "doctest.h"

using namespace aggdiff;

TEST_CASE("detect_convergence on a constant trajectory") {
  const LatticeState s({0.42, 0.42}, BoundaryCondition::NoFlux);
  const Trajectory traj = simulate(s, 100, 0.0);
  const ConvergenceResult res = detect_convergence(traj, 1e-12, 10);
  CHECK(res.converged);
  REQUIRE(res.limit.has_value());
  CHECK(*res.limit == s.interior);
}

TEST_CASE("detect_convergence sees an unconverged run") {
  const LatticeState s({0.2, 0.8, 0.35}, BoundaryCondition::Hostile);
  const Trajectory traj = simulate(s, 5, 0.0);
  CHECK_FALSE(detect_convergence(traj, 1e-14, 5).converged);
  CHECK_THROWS_AS(detect_convergence(traj, -1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(detect_convergence(traj, 1e-9, 0), std::invalid_argument);
}

TEST_CASE("monotone band data settles on the interior mean") {
  const LatticeState s({0.5, 0.66, 0.7, 0.98}, BoundaryCondition::NoFlux);
  const Trajectory traj = simulate(s, 5000000, 1e-13);
  const ConvergenceResult res = detect_convergence(traj, 1e-12, 100);
  CHECK(res.converged);
  const double mean = predicted_limit_monotone(s);
  for (double v : *res.limit) CHECK(v == doctest::Approx(mean).epsilon(1e-8));
}

TEST_CASE("predicted_limit_monotone arithmetic and hypotheses") {
  CHECK(predicted_limit_monotone(
            LatticeState({0.5, 0.7, 0.9}, BoundaryCondition::NoFlux)) ==
        doctest::Approx(0.7).epsilon(1e-15));
  CHECK(predicted_limit_monotone(
            LatticeState({0.64, 0.64}, BoundaryCondition::NoFlux)) ==
        doctest::Approx(0.64).epsilon(1e-15));
  CHECK(predicted_limit_monotone(LatticeState({0.5, 0.5, 0.6, 0.8},
                                              BoundaryCondition::NoFlux)) ==
        doctest::Approx(0.6).epsilon(1e-15));
  CHECK_THROWS_AS(predicted_limit_monotone(
                      LatticeState({0.5, 0.9, 0.7}, BoundaryCondition::NoFlux)),
                  std::domain_error);
  CHECK_THROWS_AS(predicted_limit_monotone(
                      LatticeState({0.3, 0.5, 0.7}, BoundaryCondition::NoFlux)),
                  std::domain_error);
  CHECK_THROWS_AS(predicted_limit_monotone(LatticeState(
                      {0.5, 0.7, 0.9}, BoundaryCondition::Hostile)),
                  std::domain_error);
}

TEST_CASE("classification of the worked examples") {
  SUBCASE("middle-heavy aggregative triple") {
    const CaseReport r = classify_n4(0.2, 0.4, 0.3);
    CHECK(r.label == CaseLabel::Case3);
    REQUIRE(r.predicted_limit.has_value());
    CHECK((*r.predicted_limit)[0] == 0.0);
    CHECK((*r.predicted_limit)[1] == doctest::Approx(0.9).epsilon(1e-14));
    CHECK((*r.predicted_limit)[2] == 0.0);
  }
  SUBCASE("left pair diffusive") {
    const CaseReport r = classify_n4(0.4, 0.7, 0.2);
    CHECK(r.label == CaseLabel::Case1);
    CHECK_FALSE(r.open);
    REQUIRE(r.predicted_limit.has_value());
    CHECK((*r.predicted_limit)[0] == doctest::Approx(0.65).epsilon(1e-14));
    CHECK((*r.predicted_limit)[2] == 0.0);
  }
  SUBCASE("steady state") {
    const CaseReport r = classify_n4(0.5, 0.5, 0.5);
    CHECK(r.label == CaseLabel::Case9);
    REQUIRE(r.predicted_limit.has_value());
    CHECK(*r.predicted_limit == std::array<double, 3>{0.5, 0.5, 0.5});
  }
  SUBCASE("one pair diffusive with a low middle") {
    const CaseReport r = classify_n4(0.1, 0.3, 0.8);
    CHECK(r.label == CaseLabel::Case5);
    REQUIRE(r.predicted_limit.has_value());
    CHECK((*r.predicted_limit)[0] == 0.0);
    CHECK((*r.predicted_limit)[1] == doctest::Approx(0.6).epsilon(1e-14));
    CHECK((*r.predicted_limit)[2] == doctest::Approx(0.6).epsilon(1e-14));
  }
  SUBCASE("both pairs diffusive, middle minimal") {
    const CaseReport r = classify_n4(0.6, 0.55, 0.7);
    CHECK(r.label == CaseLabel::Case7);
    CHECK(r.sub_branch == "u2-min");
    CHECK_FALSE(r.open);
  }
  SUBCASE("both pairs diffusive, middle not minimal, end below threshold") {
    const CaseReport r = classify_n4(0.45, 0.7, 0.8);
    CHECK(r.label == CaseLabel::Case7);
    CHECK(r.open);
  }
  SUBCASE("one pair diffusive with a high middle") {
    const CaseReport r = classify_n4(0.3, 0.6, 0.9);
    CHECK(r.label == CaseLabel::Case8);
    CHECK(r.open);
  }
  SUBCASE("band extremum") {
    const CaseReport r = classify_n4(0.6, 0.9, 0.55);
    CHECK(r.label == CaseLabel::Case10);
  }
  SUBCASE("symmetric ends") {
    const CaseReport r = classify_n4(0.7, 0.5, 0.7);
    CHECK(r.label == CaseLabel::Case6);
    REQUIRE(r.predicted_limit.has_value());
    CHECK((*r.predicted_limit)[0] == doctest::Approx(1.9 / 3.0).epsilon(1e-14));
  }
  SUBCASE("boundary gap goes to the undetermined bucket") {
    // Left sum exactly 1 with unequal tail: a zero-coupling wall the case
    // analysis does not cover.
    const CaseReport r = classify_n4(0.4, 0.6, 0.4);
    CHECK(r.label == CaseLabel::Undetermined);
    CHECK(r.open);
  }
  SUBCASE("domain validation") {
    CHECK_THROWS_AS(classify_n4(-0.1, 0.5, 0.5), std::domain_error);
    CHECK_THROWS_AS(classify_n4(0.1, 1.5, 0.5), std::domain_error);
  }
}

TEST_CASE("classifier is total and mirror symmetric on random triples") {
  std::mt19937_64 rng(2025);
  for (int trial = 0; trial < 20000; ++trial) {
    const double a = uniform(rng, 0.0, 1.0);
    const double b = uniform(rng, 0.0, 1.0);
    const double c = uniform(rng, 0.0, 1.0);
    const CaseReport r = classify_n4(a, b, c);
    const CaseReport m = classify_n4(c, b, a);
    REQUIRE(r.label == m.label);
    REQUIRE(r.open == m.open);
    REQUIRE(r.predicted_limit.has_value() == m.predicted_limit.has_value());
    if (r.predicted_limit) {
      REQUIRE((*r.predicted_limit)[0] == (*m.predicted_limit)[2]);
      REQUIRE((*r.predicted_limit)[1] == (*m.predicted_limit)[1]);
      REQUIRE((*r.predicted_limit)[2] == (*m.predicted_limit)[0]);
    }
  }
}

TEST_CASE("verification of quick cases") {
  SUBCASE("steady state matches in zero effective steps") {
    const CaseReport r = verify_n4(0.5, 0.5, 0.5, 1000, 1e-9);
    CHECK(r.verdict == Verdict::Match);
    CHECK(r.converged);
    CHECK(r.steps_used <= 1);
    CHECK(*r.empirical_limit == std::array<double, 3>{0.5, 0.5, 0.5});
  }
  SUBCASE("middle absorbs everything") {
    const CaseReport r = verify_n4(0.2, 0.4, 0.3, 2000000, 1e-6);
    CHECK(r.verdict == Verdict::Match);
    CHECK((*r.empirical_limit)[1] == doctest::Approx(0.9).epsilon(1e-6));
  }
  SUBCASE("band minimum merges to the common value") {
    const CaseReport r = verify_n4(0.6, 0.55, 0.7, 2000000, 1e-5);
    CHECK(r.label == CaseLabel::Case7);
    CHECK(r.verdict == Verdict::Match);
    const double mean = (0.6 + 0.55 + 0.7) / 3.0;
    for (double v : *r.empirical_limit)
      CHECK(v == doctest::Approx(mean).epsilon(1e-5));
  }
  SUBCASE("open branch reports instead of asserting") {
    const CaseReport r = verify_n4(0.45, 0.7, 0.8, 200000, 1e-5);
    CHECK(r.verdict == Verdict::Open);
    CHECK(r.empirical_limit.has_value());
  }
}

TEST_CASE("decay-rate fit") {
  SUBCASE("exact exponential") {
    std::vector<std::pair<double, double>> pts;
    for (int t = 0; t <= 3; ++t)
      pts.emplace_back(static_cast<double>(t), std::exp(-2.0 * t));
    CHECK(fit_decay_rate(pts) == doctest::Approx(-2.0).epsilon(1e-12));
  }
  SUBCASE("constant series has zero rate") {
    const std::vector<std::pair<double, double>> pts{
        {0.0, 3.5}, {1.0, 3.5}, {2.0, 3.5}, {7.5, 3.5}};
    CHECK(fit_decay_rate(pts) == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("input validation") {
    const std::vector<std::pair<double, double>> two{{0.0, 1.0}, {1.0, 0.5}};
    CHECK_THROWS_AS(fit_decay_rate(two), std::domain_error);
    const std::vector<std::pair<double, double>> neg{
        {0.0, 1.0}, {1.0, -0.5}, {2.0, 0.2}};
    CHECK_THROWS_AS(fit_decay_rate(neg), std::domain_error);
    const std::vector<std::pair<double, double>> same_t{
        {1.0, 1.0}, {1.0, 0.5}, {1.0, 0.2}};
    CHECK_THROWS_AS(fit_decay_rate(same_t), std::invalid_argument);
  }
  SUBCASE("distance-to-mean decay from a band run is strictly negative") {
    LatticeState s({0.55, 0.75, 0.62, 0.9}, BoundaryCondition::NoFlux);
    const double mean = interior_mass(s) / 4.0;
    std::vector<std::pair<double, double>> series;
    for (int t = 0; t <= 400; ++t) {
      double l2 = 0.0;
      for (double v : s.interior) l2 += (v - mean) * (v - mean);
      if (l2 > 0.0) series.emplace_back(static_cast<double>(t), l2);
      s = lattice_step(s);
    }
    CHECK(fit_decay_rate(series) < 0.0);
  }
}
