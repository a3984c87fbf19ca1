#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kgl/datagen.hpp"
#include "kgl/dynamics.hpp"
#include "kgl/limits.hpp"

namespace kgl {

enum class Study {
  rate_kg_vs_sw,
  rate_sw_vs_nls,
  growth_in_time,
  sharpness_chirped,
  sharpness_rough,
  wave_diagnostics,
  solve,
};

/// Test mode: replace solver legs by e = C·ε^p (sweeps) or C·(ε²t)^p
/// (growth runs).
struct Injection {
  bool enabled = false;
  double coefficient = 1.0;
  double exponent = 2.0;
};

struct SweepConfig {
  Study study = Study::rate_kg_vs_sw;
  std::vector<double> epsilons{0.25, 0.125, 0.0625, 0.03125};
  int dim = 1;
  double extent = 40.0;
  int points = 512;
  DataSpec data;

  /// T for rate studies and diagnostics; T₀ for sharpness (window [T₀−1, T₀]).
  double horizon = 2.0;
  /// Output samples per unit of original time.
  double samples_per_unit = 64.0;

  // growth-in-time / sharpness-rough
  double t_min = 1.0;
  int t_count = 16;
  /// Growth window ends at window_delta·ε⁻².
  double window_delta = 0.5;
  double dominance_factor = 3.0;
  Pairing growth_pairing = Pairing::sw_vs_nls;

  double lambda_kg = 1.0;
  double lambda_profile = 3.0;
  StepPolicy policy;
  double nls_step = 1e-3;

  std::vector<double> gammas;
  double drift_tolerance = 1e-5;
  Injection injection;
  int jobs = 1;

  // solve verb
  EquationKind solve_equation = EquationKind::unit_kg;
  double solve_epsilon = 1.0;

  void validate() const;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< max |log error − fit|
  int points = 0;
};

/// Ordinary least squares on (log x, log error). Throws std::invalid_argument
/// for fewer than 3 points or nonpositive entries.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points);

/// One CSV row.
struct ResultRow {
  std::string study;
  int d = 1;
  double epsilon = 0.0;
  double t = 0.0;
  double err_l2 = 0.0;
  double err_sobolev_gamma = 0.0;
  double w1_l2 = 0.0;
  double w2_l2 = 0.0;
  double energy_drift = 0.0;
  double mass_drift = 0.0;
  std::string scheme;
  double h0 = 0.0;
  int grid_points = 0;
  double box_extent = 0.0;

  bool operator==(const ResultRow&) const;
};

/// Per-ε summary of one pair of legs.
struct LegSummary {
  double epsilon = 0.0;
  double value = 0.0;  ///< sup error, max ‖W₁‖, or fitted slope (growth)
  double secondary = 0.0;
  double energy_drift = 0.0;
  double mass_drift = 0.0;
  double mass_outside = 0.0;  ///< max mass fraction outside the half-box
  bool converged = true;
};

struct SweepResult {
  Study study = Study::rate_kg_vs_sw;
  std::vector<ResultRow> rows;
  std::vector<LegSummary> legs;
  std::optional<RateFit> fit;
  std::optional<RateFit> secondary_fit;
  /// Named scalar outcomes (ratio bounds, defect functional, ...).
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::string> warnings;

  double summary_value(const std::string& key) const;
};

SweepResult run_convergence_sweep(const SweepConfig& config);
SweepResult run_growth_in_time(const SweepConfig& config);
SweepResult run_sharpness_chirped(const SweepConfig& config);
SweepResult run_wave_diagnostics(const SweepConfig& config);
/// Single solve of config.solve_equation; rows carry conserved drifts only.
SweepResult run_solve(const SweepConfig& config);
/// Dispatch on config.study.
SweepResult run_study(const SweepConfig& config);

/// u₀, u₁ and the profile data v₀, v₁ built from config.data on grid.
struct PreparedData {
  SpectralField u0, u1, v0, v1;
};
PreparedData prepare_data(const SweepConfig& config, const TorusGrid& grid);

/// Fraction of ‖f‖² in the region outside the half-box |x_i| < L/4.
double mass_outside_half_box(const SpectralField& f);

struct RunManifest {
  std::vector<std::pair<std::string, std::string>> entries;
  void add(const std::string& key, const std::string& value) { entries.emplace_back(key, value); }
  void add(const std::string& key, double value);
};

RunManifest make_manifest(const SweepConfig& config, const SweepResult& result, double wall_seconds);

struct EmittedFiles {
  std::filesystem::path csv;
  std::filesystem::path manifest;
  std::optional<std::filesystem::path> plot;
};

/// Writes <stem>.csv, <stem>.manifest.txt and optionally <stem>.svg under
/// out_dir. Throws IoError naming the path on failure.
EmittedFiles emit_results(const SweepResult& result, const RunManifest& manifest,
                          const std::filesystem::path& out_dir, const std::string& stem,
                          bool plot = false);

std::string csv_header();
std::string format_csv_row(const ResultRow& row);
std::vector<ResultRow> read_csv(const std::filesystem::path& path);
std::vector<ResultRow> parse_csv(const std::string& text);

std::string to_string(Study study);

}  // namespace kgl
