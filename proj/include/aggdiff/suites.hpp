#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace aggdiff {

/// One named check inside a suite. Non-assertable checks are experimental
/// reports: their outcome is printed but never fails the suite.
struct CheckResult {
  std::string name;
  bool assertable = true;
  bool pass = true;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::vector<CheckResult> checks;

  bool pass() const {
    for (const auto& c : checks)
      if (c.assertable && !c.pass) return false;
    return true;
  }
  const CheckResult* find(const std::string& check_name) const {
    for (const auto& c : checks)
      if (c.name == check_name) return &c;
    return nullptr;
  }
};

/// Theorem-verification suites. Sizes and tolerances are fixed by the
/// acceptance contract; the seed only steers the random corpora.
SuiteResult run_bounds_suite(std::uint64_t seed);
SuiteResult run_conservation_suite(std::uint64_t seed);
SuiteResult run_monotone_suite(std::uint64_t seed);
SuiteResult run_regions_suite(std::uint64_t seed);
SuiteResult run_n4_suite(std::uint64_t seed);
SuiteResult run_continuum_suite();
SuiteResult run_illposed_suite();

/// All suites in fixed order; names: bounds, conservation, monotone,
/// regions, n4, continuum, illposed.
std::vector<SuiteResult> run_all_suites(std::uint64_t seed);

/// Runs the suites selected by name (empty = all).
std::vector<SuiteResult> run_suites(const std::vector<std::string>& names,
                                    std::uint64_t seed);

inline constexpr std::uint64_t kDefaultSuiteSeed = 20240601ULL;

}  // namespace aggdiff
