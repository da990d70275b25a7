// Command-line driver: runs lattice and continuum experiments, classifies
// and verifies N=4 asymptotics, and executes the theorem-check suites.
// Outputs are CSV/JSON files plus a per-run manifest; identical
// configurations (including seeds) produce byte-identical data files.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <future>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aggdiff/asymptotics.hpp"
#include "aggdiff/continuum.hpp"
#include "aggdiff/errors.hpp"
#include "aggdiff/io.hpp"
#include "aggdiff/lattice.hpp"
#include "aggdiff/profiles.hpp"
#include "aggdiff/regions.hpp"
#include "aggdiff/suites.hpp"
#include "aggdiff/version.hpp"
#include "json.hpp"

using nlohmann::json;
using namespace aggdiff;

namespace {

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct ManifestBuilder {
  json config;
  std::string mode;
  std::string started = iso_now();
  std::vector<std::string> outputs;
  json verdicts = json::object();

  void write(const std::string& prefix) {
    json m;
    m["tool"] = kToolName;
    m["version"] = kVersion;
    m["mode"] = mode;
    m["config"] = config;
    m["started_utc"] = started;
    m["finished_utc"] = iso_now();
    m["outputs"] = outputs;
    m["verdicts"] = verdicts;
    write_text_file(prefix + "_manifest.json", m.dump(2) + "\n");
  }
};

json report_to_json(const CaseReport& r) {
  json j;
  j["input"] = r.initial;
  j["label"] = to_string(r.label);
  j["sub_branch"] = r.sub_branch;
  j["open"] = r.open;
  if (r.predicted_limit)
    j["predicted_limit"] = *r.predicted_limit;
  else
    j["predicted_limit"] = nullptr;
  j["predicted_structure"] = r.predicted_structure;
  if (r.verdict) j["verdict"] = to_string(*r.verdict);
  if (r.empirical_limit) {
    json e;
    e["limit"] = *r.empirical_limit;
    e["converged"] = r.converged;
    e["steps"] = r.steps_used;
    e["final_change"] = r.final_change;
    if (r.oscillation) {
      json o;
      o["env_min"] = r.oscillation->env_min;
      o["env_max"] = r.oscillation->env_max;
      o["window_steps"] = r.oscillation->window_steps;
      o["period_candidate"] = r.oscillation->period_candidate;
      o["period_score"] = r.oscillation->period_score;
      e["oscillation"] = o;
    }
    j["empirical"] = e;
  }
  return j;
}

int run_lattice(const std::string& init_spec, int n_points,
                const std::string& bc_name, std::int64_t steps, double tol,
                int stride, const std::string& prefix, std::uint64_t seed,
                bool svg) {
  const BoundaryCondition bc = bc_name == "hostile"
                                   ? BoundaryCondition::Hostile
                                   : BoundaryCondition::NoFlux;
  const InitialProfile profile = parse_profile(init_spec);
  std::vector<double> u0;
  if (profile.kind == InitialProfile::Kind::List) {
    u0 = profile.values;
  } else {
    if (n_points < 2)
      throw std::invalid_argument("--n must be >= 2 for non-list profiles");
    u0 = lattice_values(profile, n_points, seed);
  }
  const LatticeState init(u0, bc);
  const Trajectory traj = simulate(init, steps, tol, stride);

  ManifestBuilder manifest;
  manifest.mode = "lattice-run";
  manifest.config = {{"init", init_spec}, {"n", init.n_points()},
                     {"bc", to_string(bc)}, {"steps", steps},
                     {"tol", tol},         {"stride", stride},
                     {"seed", seed},       {"out", prefix}};

  CsvWriter series({"step", "j", "u"});
  for (std::size_t s = 0; s < traj.states.size(); ++s)
    for (std::size_t i = 0; i < traj.states[s].interior.size(); ++i)
      series.add_row({static_cast<double>(traj.snapshot_steps[s]),
                      static_cast<double>(i + 1),
                      traj.states[s].interior[i]});
  series.write(prefix + "_series.csv");
  manifest.outputs.push_back(prefix + "_series.csv");

  // Region history keeps only snapshots where the forward set changes.
  json regions = json::array();
  std::vector<int> last_forward;
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    const RegionPartition part = forward_region(traj.states[s]);
    if (s == 0 || part.forward != last_forward) {
      regions.push_back(
          {{"step", traj.snapshot_steps[s]}, {"forward", part.forward}});
      last_forward = part.forward;
    }
  }
  const RegionMonotoneResult region_check = check_region_monotone(traj);

  json summary;
  summary["converged"] = traj.converged;
  summary["steps"] = traj.step_count;
  summary["final_state"] = traj.final_state().interior;
  const double m0 = interior_mass(traj.initial());
  const double m1 = interior_mass(traj.final_state());
  summary["interior_mass"] = {{"initial", m0},
                              {"final", m1},
                              {"relative_drift",
                               std::abs(m1 - m0) / std::max(m0, 1e-300)}};
  summary["region_history"] = regions;
  summary["region_monotone"] = {{"pass", region_check.pass},
                                {"first_violation_step",
                                 region_check.first_violation_step}};
  summary["spread"] = {{"initial", spread(traj.initial())},
                       {"final", spread(traj.final_state())}};
  write_text_file(prefix + "_summary.json", summary.dump(2) + "\n");
  manifest.outputs.push_back(prefix + "_summary.json");

  if (svg) {
    SvgSeries s0{"initial", {}, {}};
    SvgSeries s1{"final", {}, {}};
    for (std::size_t i = 0; i < init.interior.size(); ++i) {
      const double x = static_cast<double>(i + 1) / init.n_points();
      s0.x.push_back(x);
      s0.y.push_back(init.interior[i]);
      s1.x.push_back(x);
      s1.y.push_back(traj.final_state().interior[i]);
    }
    write_text_file(prefix + "_profile.svg",
                    render_svg_chart("lattice profile", {s0, s1}));
    manifest.outputs.push_back(prefix + "_profile.svg");
  }

  manifest.verdicts = {{"converged", traj.converged},
                       {"region_monotone", region_check.pass}};
  manifest.write(prefix);
  std::cout << "lattice-run: steps=" << traj.step_count
            << " converged=" << (traj.converged ? "yes" : "no") << '\n';
  return 0;
}

int run_pde(const std::string& profile_spec, int m, double eps, double tmax,
            double sample_every, const std::string& prefix, std::uint64_t seed,
            bool svg) {
  const InitialProfile profile = parse_profile(profile_spec);
  std::vector<double> u0 = profile.kind == InitialProfile::Kind::List
                               ? profile.values
                               : continuum_values(profile, m, seed);
  const ContinuumState init(u0, eps);

  // Sub-threshold data with vanishing regularization has no stable step;
  // fall back to the fixed-step probe path and record growth instead.
  const bool backward_somewhere = [&] {
    const auto& model = ModelFunctions::canonical();
    for (std::size_t i = 0; i + 1 < init.cells.size(); ++i) {
      const double mid = 0.5 * (init.cells[i] + init.cells[i + 1]);
      if (model.diffusivity(mid) + eps < 0.0) return true;
    }
    return false;
  }();
  const PdeRunResult run =
      backward_somewhere
          ? pde_simulate_fixed_dt(init, tmax, sample_every)
          : pde_simulate(init, tmax, sample_every);

  ManifestBuilder manifest;
  manifest.mode = "pde-run";
  manifest.config = {{"profile", profile_spec}, {"m", m},
                     {"eps", eps},              {"tmax", tmax},
                     {"sample_every", sample_every}, {"seed", seed},
                     {"out", prefix}};

  CsvWriter diag({"t", "mass", "energy", "weak_energy", "l2_to_mean",
                  "max_gradient"});
  for (const auto& d : run.samples)
    diag.add_row({d.time, d.mass, d.energy, d.weak_energy, d.l2_to_mean,
                  d.max_gradient});
  diag.write(prefix + "_diagnostics.csv");
  manifest.outputs.push_back(prefix + "_diagnostics.csv");

  CsvWriter fin({"x", "u"});
  for (int i = 0; i < run.final_state.m(); ++i)
    fin.add_row({run.final_state.x_center(i),
                 run.final_state.cells[static_cast<std::size_t>(i)]});
  fin.write(prefix + "_final.csv");
  manifest.outputs.push_back(prefix + "_final.csv");

  const double mass0 = run.samples.front().mass;
  double drift = 0.0, energy_slip = 0.0;
  for (std::size_t i = 0; i < run.samples.size(); ++i) {
    drift = std::max(drift, std::abs(run.samples[i].mass - mass0) /
                                std::max(std::abs(mass0), 1e-300));
    if (i)
      energy_slip = std::max(energy_slip, run.samples[i].energy -
                                              run.samples[i - 1].energy);
  }
  std::vector<std::pair<double, double>> fitpts;
  for (const auto& d : run.samples)
    if (d.l2_to_mean > 1e-24 && d.time >= 0.05 * tmax)
      fitpts.emplace_back(d.time, d.l2_to_mean);
  json fit = nullptr;
  if (fitpts.size() >= 3) {
    fit = json::object();
    fit["rate"] = fit_decay_rate(fitpts);
    fit["points"] = fitpts.size();
  }
  const double g0 = run.samples.front().max_gradient;
  const double g1 = run.samples.back().max_gradient;

  json summary;
  summary["m"] = m;
  summary["eps"] = eps;
  summary["tmax"] = tmax;
  summary["diverged"] = run.diverged;
  summary["mass"] = {{"initial", mass0},
                     {"final", run.samples.back().mass},
                     {"relative_drift", drift}};
  summary["energy_nonincreasing"] = energy_slip <= 1e-12;
  summary["l2_to_mean_final"] = run.samples.back().l2_to_mean;
  summary["max_gradient"] = {
      {"initial", g0},
      {"final", g1},
      {"growth_factor", g0 > 0.0 ? g1 / g0 : g1}};
  summary["gradient_growth"] = g1 > 10.0 * std::max(g0, 1e-300);
  summary["decay_fit"] = fit;
  write_text_file(prefix + "_summary.json", summary.dump(2) + "\n");
  manifest.outputs.push_back(prefix + "_summary.json");

  if (svg) {
    SvgSeries l2{"l2_to_mean", {}, {}};
    SvgSeries en{"energy", {}, {}};
    for (const auto& d : run.samples) {
      l2.x.push_back(d.time);
      l2.y.push_back(d.l2_to_mean);
      en.x.push_back(d.time);
      en.y.push_back(d.energy);
    }
    write_text_file(prefix + "_diagnostics.svg",
                    render_svg_chart("diagnostics", {l2, en}));
    manifest.outputs.push_back(prefix + "_diagnostics.svg");
  }

  manifest.verdicts = {{"diverged", run.diverged},
                       {"energy_nonincreasing", energy_slip <= 1e-12},
                       {"mass_conserved", drift <= 1e-10}};
  manifest.write(prefix);
  std::cout << "pde-run: steps=" << run.steps
            << " l2_to_mean_final=" << format_double(run.samples.back().l2_to_mean)
            << (run.diverged ? " (diverged)" : "") << '\n';
  return run.diverged && !backward_somewhere ? 2 : 0;
}

int run_classify(const std::string& triple, bool simulate_flag,
                 std::int64_t steps, double tol) {
  std::array<double, 3> u{};
  {
    std::stringstream ss(triple);
    std::string item;
    int k = 0;
    while (std::getline(ss, item, ',') && k < 3) u[k++] = std::stod(item);
    if (k != 3) throw std::invalid_argument("--triple needs exactly 3 values");
  }
  const CaseReport rep = simulate_flag
                             ? verify_n4(u[0], u[1], u[2], steps, tol)
                             : classify_n4(u[0], u[1], u[2]);
  std::cout << report_to_json(rep).dump(2) << '\n';
  return 0;
}

int run_verify(const std::vector<std::string>& suites, std::uint64_t seed,
               const std::string& out_prefix) {
  const std::vector<SuiteResult> results = run_suites(suites, seed);
  bool all_pass = true;
  json report = json::array();
  for (const auto& suite : results) {
    for (const auto& check : suite.checks) {
      const bool counted = check.assertable;
      const bool ok = check.pass || !counted;
      std::cout << (check.pass ? "[PASS] " : (counted ? "[FAIL] " : "[info] "))
                << suite.name << '/' << check.name;
      if (!check.detail.empty()) std::cout << " — " << check.detail;
      if (!counted) std::cout << " (report-only)";
      std::cout << '\n';
      all_pass = all_pass && ok;
      report.push_back({{"suite", suite.name},
                        {"check", check.name},
                        {"assertable", check.assertable},
                        {"pass", check.pass},
                        {"detail", check.detail}});
    }
  }
  std::cout << (all_pass ? "verify: all assertable checks passed"
                         : "verify: FAILURES present")
            << '\n';
  if (!out_prefix.empty()) {
    ManifestBuilder manifest;
    manifest.mode = "verify";
    manifest.config = {{"suites", suites}, {"seed", seed}};
    write_text_file(out_prefix + "_verify.json", report.dump(2) + "\n");
    manifest.outputs.push_back(out_prefix + "_verify.json");
    manifest.verdicts = {{"all_assertable_passed", all_pass}};
    manifest.write(out_prefix);
  }
  return all_pass ? 0 : 3;
}

struct SweepChild {
  std::string prefix;
  int exit_code = 0;
};

int run_sweep(const std::string& mode, const std::string& param,
              const std::vector<std::string>& values, const json& base,
              const std::string& prefix, int jobs) {
  if (mode != "lattice" && mode != "pde")
    throw std::invalid_argument("--mode must be lattice or pde");
  std::vector<std::future<SweepChild>> futures;
  std::vector<SweepChild> children;
  const auto launch = [&](const std::string& value) {
    return std::async(
        jobs > 1 ? std::launch::async : std::launch::deferred,
        [&, value]() -> SweepChild {
          SweepChild child;
          child.prefix = prefix + "_" + param + value;
          try {
            if (mode == "pde") {
              child.exit_code = run_pde(
                  base.at("profile").get<std::string>(),
                  param == "m" ? std::stoi(value) : base.at("m").get<int>(),
                  param == "eps" ? std::stod(value)
                                 : base.at("eps").get<double>(),
                  base.at("tmax").get<double>(),
                  base.at("sample_every").get<double>(), child.prefix,
                  param == "seed" ? std::stoull(value)
                                  : base.at("seed").get<std::uint64_t>(),
                  false);
            } else {
              child.exit_code = run_lattice(
                  base.at("init").get<std::string>(),
                  param == "n" ? std::stoi(value) : base.at("n").get<int>(),
                  base.at("bc").get<std::string>(),
                  base.at("steps").get<std::int64_t>(),
                  base.at("tol").get<double>(), base.at("stride").get<int>(),
                  child.prefix,
                  param == "seed" ? std::stoull(value)
                                  : base.at("seed").get<std::uint64_t>(),
                  false);
            }
          } catch (const std::exception& e) {
            std::cerr << "sweep item " << value << " failed: " << e.what()
                      << '\n';
            child.exit_code = 2;
          }
          return child;
        });
  };
  for (const auto& v : values) futures.push_back(launch(v));
  int worst = 0;
  ManifestBuilder manifest;
  manifest.mode = "sweep";
  manifest.config = {{"mode", mode}, {"param", param}, {"values", values},
                     {"base", base}, {"jobs", jobs}};
  for (auto& f : futures) {
    const SweepChild child = f.get();
    worst = std::max(worst, child.exit_code);
    manifest.outputs.push_back(child.prefix + "_manifest.json");
    children.push_back(child);
  }
  manifest.verdicts = {{"all_succeeded", worst == 0}};
  manifest.write(prefix);
  std::cout << "sweep: " << children.size() << " runs, worst exit " << worst
            << '\n';
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice and continuum experiments for threshold-switching "
               "aggregation-diffusion dynamics"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "Read options from an INI/TOML file");
  app.require_subcommand(1);

  // lattice-run
  auto* lat = app.add_subcommand("lattice-run", "Simulate the lattice model");
  std::string init_spec, bc_name = "noflux", out_prefix = "out";
  int n_points = 0, stride = 1;
  std::int64_t steps = 10000;
  double tol = 1e-12;
  std::uint64_t seed = 0;
  bool svg = false;
  lat->add_option("--init", init_spec,
                  "Initial data: list, constant c, ramp a b, a+b*cos(k*pi*x), "
                  "random lo hi [seed s]")
      ->required();
  lat->add_option("--n", n_points, "Lattice points N (interior is N-1)");
  lat->add_option("--bc", bc_name, "Boundary: noflux|hostile")
      ->check(CLI::IsMember({"noflux", "hostile"}));
  lat->add_option("--steps", steps, "Maximum steps");
  lat->add_option("--tol", tol, "Stop when the max-norm change drops below");
  lat->add_option("--stride", stride, "Record every k-th state");
  lat->add_option("--out", out_prefix, "Output file prefix");
  lat->add_option("--seed", seed, "Seed for random profiles");
  lat->add_flag("--svg", svg, "Also write a small SVG chart");

  // pde-run
  auto* pde = app.add_subcommand("pde-run", "Simulate the regularized equation");
  std::string profile_spec;
  int m_cells = 200;
  double eps = 1e-3, tmax = 5.0, sample_every = 0.05;
  pde->add_option("--profile", profile_spec, "Initial profile")->required();
  pde->add_option("--m", m_cells, "Number of grid cells");
  pde->add_option("--eps", eps, "Regularization added to the diffusivity");
  pde->add_option("--tmax", tmax, "Final time");
  pde->add_option("--sample-every", sample_every, "Diagnostics cadence");
  pde->add_option("--out", out_prefix, "Output file prefix");
  pde->add_option("--seed", seed, "Seed for random profiles");
  pde->add_flag("--svg", svg, "Also write a small SVG chart");

  // classify-n4
  auto* cls = app.add_subcommand(
      "classify-n4", "Classify a hostile-boundary triple (optionally verify)");
  std::string triple;
  bool simulate_flag = false;
  std::int64_t cls_steps = 10000000;
  double cls_tol = 1e-5;
  cls->add_option("--triple", triple, "Initial values u1,u2,u3")->required();
  cls->add_flag("--simulate", simulate_flag,
                "Run the dynamics and attach the empirical limit and verdict");
  cls->add_option("--steps", cls_steps, "Step budget for --simulate");
  cls->add_option("--tol", cls_tol, "Match tolerance for --simulate");

  // verify
  auto* ver = app.add_subcommand("verify", "Run the theorem-check suites");
  std::vector<std::string> suites;
  std::uint64_t verify_seed = kDefaultSuiteSeed;
  std::string verify_out;
  ver->add_option("--suite", suites,
                  "bounds|conservation|monotone|regions|n4|continuum|illposed "
                  "(repeatable; default all)");
  ver->add_option("--seed", verify_seed, "Seed for the random corpora");
  ver->add_option("--out", verify_out, "Optional report prefix");

  // sweep
  auto* swp = app.add_subcommand("sweep", "Fan out runs over a parameter list");
  std::string sweep_mode = "pde", sweep_param = "eps", sweep_values;
  int jobs = 4;
  swp->add_option("--mode", sweep_mode, "lattice|pde")
      ->check(CLI::IsMember({"lattice", "pde"}));
  swp->add_option("--param", sweep_param, "eps|m|n|seed");
  swp->add_option("--values", sweep_values, "Comma-separated values")
      ->required();
  swp->add_option("--jobs", jobs, "Concurrent runs");
  swp->add_option("--init", init_spec, "Lattice initial data");
  swp->add_option("--profile", profile_spec, "Continuum profile");
  swp->add_option("--n", n_points, "Lattice points");
  swp->add_option("--bc", bc_name, "Boundary mode");
  swp->add_option("--steps", steps, "Lattice step budget");
  swp->add_option("--tol", tol, "Lattice stop tolerance");
  swp->add_option("--stride", stride, "Lattice snapshot stride");
  swp->add_option("--m", m_cells, "Continuum cells");
  swp->add_option("--eps", eps, "Continuum regularization");
  swp->add_option("--tmax", tmax, "Continuum final time");
  swp->add_option("--sample-every", sample_every, "Continuum cadence");
  swp->add_option("--out", out_prefix, "Output prefix");
  swp->add_option("--seed", seed, "Base seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (lat->parsed())
      return run_lattice(init_spec, n_points, bc_name, steps, tol, stride,
                         out_prefix, seed, svg);
    if (pde->parsed())
      return run_pde(profile_spec, m_cells, eps, tmax, sample_every,
                     out_prefix, seed, svg);
    if (cls->parsed())
      return run_classify(triple, simulate_flag, cls_steps, cls_tol);
    if (ver->parsed()) return run_verify(suites, verify_seed, verify_out);
    if (swp->parsed()) {
      std::vector<std::string> values;
      std::stringstream ss(sweep_values);
      std::string item;
      while (std::getline(ss, item, ',')) values.push_back(item);
      json base = {{"init", init_spec}, {"profile", profile_spec},
                   {"n", n_points},     {"bc", bc_name},
                   {"steps", steps},    {"tol", tol},
                   {"stride", stride},  {"m", m_cells},
                   {"eps", eps},        {"tmax", tmax},
                   {"sample_every", sample_every}, {"seed", seed}};
      return run_sweep(sweep_mode, sweep_param, values, base, out_prefix, jobs);
    }
  } catch (const invariant_violation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return 2;
  } catch (const stability_error& e) {
    std::cerr << "stability error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
