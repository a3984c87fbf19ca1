// kglab: command-line driver for the Klein-Gordon limit studies.
//
//   kglab sweep --config configs/rate_kg_vs_sw.ini --out results
//   kglab validate
//
// Exit codes: 0 success, 2 config error, 3 numerical abort, 4 I/O error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kgl/config.hpp"
#include "kgl/error.hpp"
#include "kgl/experiments.hpp"
#include "kgl/validate.hpp"

namespace {

enum Exit { kOk = 0, kFailed = 1, kConfig = 2, kNumerical = 3, kIo = 4 };

struct Options {
  std::string config;
  std::string out;
  std::vector<std::string> overrides;
  std::optional<int> jobs;
  std::optional<unsigned> seed;
  bool plot = false;
  std::string fault;
};

void print_result(const kgl::SweepResult& r) {
  std::printf("study %s: %zu rows, %zu legs\n", kgl::to_string(r.study).c_str(), r.rows.size(), r.legs.size());
  for (const auto& leg : r.legs) {
    std::printf("  eps=%-10.6g value=%-12.6g secondary=%-12.6g drift(E)=%-9.3g drift(M)=%-9.3g%s\n", leg.epsilon,
                leg.value, leg.secondary, leg.energy_drift, leg.mass_drift, leg.converged ? "" : "  [unconverged]");
  }
  for (const auto& [k, v] : r.summary) std::printf("  %s = %.6g\n", k.c_str(), v);
  for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

int run_study_verb(const Options& o, std::optional<kgl::Study> forced,
                   const std::vector<kgl::Study>& allowed) {
  kgl::SweepConfig config = kgl::parse_config(o.config, o.overrides);
  if (o.jobs) config.jobs = *o.jobs;
  if (forced) config.study = *forced;
  if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), config.study) == allowed.end()) {
    throw kgl::ConfigError("study '" + kgl::to_string(config.study) + "' is not handled by this verb");
  }
  config.validate();

  const auto start = std::chrono::steady_clock::now();
  const kgl::SweepResult result = kgl::run_study(config);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  kgl::RunManifest manifest = kgl::make_manifest(config, result, wall);
  if (o.seed) manifest.add("seed", std::to_string(*o.seed));
  const auto files = kgl::emit_results(result, manifest, o.out, kgl::to_string(config.study), o.plot);
  print_result(result);
  std::printf("wrote %s\n", files.csv.string().c_str());
  return kOk;
}

int run_validate(const Options& o) {
  const auto checks = kgl::run_validation(o.fault);
  bool ok = true;
  for (const auto& c : checks) {
    std::printf("[%s] %-30s value=%.3e tol=%.1e\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.value, c.tolerance);
    ok = ok && c.passed;
  }
  return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral laboratory for the non-relativistic Klein-Gordon limit"};
  app.require_subcommand(1, 1);
  Options o;

  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Study config (INI)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output directory")->required();
    sub->add_option("--set", o.overrides, "Override a key: section.key=value (repeatable)");
    sub->add_option("--jobs", o.jobs, "Cap on concurrent per-epsilon legs")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "Seed for noisy test vectors");
    sub->add_flag("--plot", o.plot, "Also write an SVG plot");
  };
  auto* solve = app.add_subcommand("solve", "Integrate one equation and report conserved quantities");
  auto* sweep = app.add_subcommand("sweep", "Run a rate or growth study");
  auto* counter = app.add_subcommand("counterexample", "Run a sharpness study");
  auto* waves = app.add_subcommand("diagnose-waves", "Track leftward/rightward wave norms");
  auto* validate = app.add_subcommand("validate", "Run the analytic check battery");
  for (auto* sub : {solve, sweep, counter, waves}) add_run_flags(sub);
  validate->add_option("--fault", o.fault, "Corrupt the named check (test hook)")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*validate) return run_validate(o);
    if (*solve) return run_study_verb(o, kgl::Study::solve, {});
    if (*waves) return run_study_verb(o, kgl::Study::wave_diagnostics, {});
    if (*counter) return run_study_verb(o, std::nullopt, {kgl::Study::sharpness_chirped, kgl::Study::sharpness_rough});
    return run_study_verb(o, std::nullopt,
                          {kgl::Study::rate_kg_vs_sw, kgl::Study::rate_sw_vs_nls, kgl::Study::growth_in_time,
                           kgl::Study::sharpness_rough});
  } catch (const kgl::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const kgl::NumericalError& e) {
    std::fprintf(stderr, "numerical abort: %s\n", e.what());
    return kNumerical;
  } catch (const kgl::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailed;
  }
}
