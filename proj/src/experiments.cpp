#include "kgl/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "kgl/error.hpp"
#include "kgl/multiplier.hpp"
#include "kgl/norms.hpp"

namespace kgl {

namespace {

constexpr double kMassGuard = 1e-10;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

bool is_rate_study(Study s) { return s == Study::rate_kg_vs_sw || s == Study::rate_sw_vs_nls; }

TorusGrid study_grid(const SweepConfig& c) { return make_grid(c.dim, c.extent, c.points); }

std::vector<double> uniform_times(double start, double stop, double per_unit) {
  const auto n = static_cast<long long>(std::llround((stop - start) * per_unit));
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(n) + 1);
  for (long long k = 0; k <= n; ++k) t.push_back(start + (stop - start) * static_cast<double>(k) / n);
  return t;
}

std::vector<double> log_times(double t_min, double t_max, int count) {
  std::vector<double> t;
  const double a = std::log(t_min);
  const double b = std::log(t_max);
  for (int k = 0; k < count; ++k) t.push_back(std::exp(a + (b - a) * k / (count - 1)));
  t.front() = t_min;
  t.back() = t_max;
  return t;
}

ResultRow base_row(const SweepConfig& c, double eps, double t) {
  ResultRow r;
  r.study = to_string(c.study);
  r.d = c.dim;
  r.epsilon = eps;
  r.t = t;
  r.scheme = to_string(c.policy.scheme);
  r.h0 = c.policy.base_step;
  r.grid_points = c.points;
  r.box_extent = c.extent;
  return r;
}

double max_mass_outside(const Trajectory& traj) {
  double m = 0.0;
  for (const auto& s : traj) m = std::max(m, mass_outside_half_box(s.position));
  return m;
}

// Runs body(i) for i in [0, count) on at most `jobs` threads. Results are
// written by index, so the outcome does not depend on scheduling.
template <class Body>
void run_legs(std::size_t count, int jobs, Body body) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Re-raise a solver failure with the offending ε attached.
template <class Fn>
auto with_epsilon(double eps, Fn fn) {
  try {
    return fn();
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(e.what()) + " (epsilon=" + std::to_string(eps) + ")");
  }
}

StepPolicy nls_policy(const SweepConfig& c) {
  StepPolicy p = c.policy;
  p.scheme = Scheme::strang_trig;
  p.base_step = c.nls_step;
  return p;
}

struct LegOutput {
  std::vector<ResultRow> rows;
  LegSummary summary;
};

// Both legs of one pairing on the given times; rows carry the remainder.
LegOutput run_pair(const SweepConfig& c, double eps, Pairing pairing,
                   const std::vector<double>& times) {
  const TorusGrid grid = study_grid(c);
  const PreparedData data = prepare_data(c, grid);
  // Drifts are measured from t = 0 even when the sampled window starts later.
  std::vector<double> solve_times = times;
  const bool padded = !times.empty() && times.front() > 0.0;
  if (padded) solve_times.insert(solve_times.begin(), 0.0);
  Trajectory reference;
  Trajectory profile;
  EquationSpec ref_spec;
  EquationSpec prof_spec;
  if (pairing == Pairing::sw_vs_nls) {
    ref_spec = {EquationKind::schrodinger_wave, eps, c.lambda_profile};
    reference = solve_schrodinger_wave(data.v0, data.v1, ref_spec, solve_times, c.policy);
  } else {
    ref_spec = {EquationKind::kg_eps, eps, c.lambda_kg};
    reference = solve_kg_eps(data.u0, data.u1, ref_spec, solve_times, c.policy);
  }
  if (pairing == Pairing::kg_vs_sw) {
    prof_spec = {EquationKind::schrodinger_wave, eps, c.lambda_profile};
    profile = solve_schrodinger_wave(data.v0, data.v1, prof_spec, solve_times, c.policy);
  } else {
    prof_spec = {EquationKind::nls, eps, c.lambda_profile};
    profile = solve_nls(data.v0, prof_spec, solve_times, nls_policy(c));
  }

  const ConservedDrift ref_drift = trajectory_drift(reference, ref_spec);
  const ConservedDrift prof_drift = trajectory_drift(profile, prof_spec);
  if (padded) {
    reference.erase(reference.begin());
    profile.erase(profile.begin());
  }
  const auto records = remainder(reference, profile, eps, pairing, c.gammas);

  LegOutput out;
  LegSummary& s = out.summary;
  s.epsilon = eps;
  s.energy_drift = std::max(ref_drift.energy, prof_drift.energy);
  s.mass_drift = std::max(ref_drift.mass, prof_drift.mass);
  s.mass_outside = std::max(max_mass_outside(reference), max_mass_outside(profile));
  s.converged = s.energy_drift <= c.drift_tolerance && s.mass_drift <= c.drift_tolerance;
  for (const auto& r : records) {
    ResultRow row = base_row(c, eps, r.time);
    row.err_l2 = r.l2_error;
    if (!c.gammas.empty()) row.err_sobolev_gamma = r.sobolev_error.at(c.gammas.front());
    row.energy_drift = s.energy_drift;
    row.mass_drift = s.mass_drift;
    s.value = std::max(s.value, r.l2_error);
    out.rows.push_back(row);
  }
  return out;
}

void add_fit_summary(SweepResult& res, const std::string& prefix, const RateFit& fit) {
  res.summary.emplace_back(prefix + "slope", fit.slope);
  res.summary.emplace_back(prefix + "intercept", fit.intercept);
  res.summary.emplace_back(prefix + "residual", fit.residual);
}

void note_mass_guard(SweepResult& res) {
  for (const auto& leg : res.legs) {
    if (leg.mass_outside > kMassGuard) {
      res.warnings.push_back("epsilon=" + std::to_string(leg.epsilon) + ": mass outside half-box " +
                             sci(leg.mass_outside) + " exceeds 1e-10");
    }
    if (!leg.converged) {
      res.warnings.push_back("epsilon=" + std::to_string(leg.epsilon) +
                             ": conserved-quantity drift above tolerance, leg excluded from fit");
    }
  }
}

std::optional<RateFit> fit_converged(const std::vector<LegSummary>& legs, bool secondary = false) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& l : legs) {
    if (l.converged) pts.emplace_back(l.epsilon, secondary ? l.secondary : l.value);
  }
  if (pts.size() < 3) return std::nullopt;
  return fit_rate(pts);
}

}  // namespace

void SweepConfig::validate() const {
  if (epsilons.empty()) throw ConfigError("epsilons must not be empty");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0 && epsilons[i] <= 1.0)) throw ConfigError("epsilons must lie in (0, 1]");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) throw ConfigError("epsilons must be strictly decreasing");
  }
  if (is_rate_study(study) && epsilons.size() < 3 && !injection.enabled) {
    throw ConfigError("rate studies need at least 3 epsilons for a slope fit");
  }
  if (dim < 1 || dim > 3) throw ConfigError("dim must be 1, 2 or 3");
  if (!(extent > 0.0)) throw ConfigError("extent must be positive");
  if (points < 8 || (points & (points - 1)) != 0) throw ConfigError("points must be a power of two >= 8");
  if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
  if (!(samples_per_unit > 0.0)) throw ConfigError("samples_per_unit must be positive");
  if (study == Study::sharpness_chirped && horizon < 1.0) throw ConfigError("sharpness window needs horizon >= 1");
  if (t_count < 3) throw ConfigError("t_count must be at least 3");
  if (!(t_min > 0.0)) throw ConfigError("t_min must be positive");
  if (!(window_delta > 0.0 && window_delta <= 1.0)) throw ConfigError("window_delta must lie in (0, 1]");
  if (!(dominance_factor > 0.0)) throw ConfigError("dominance_factor must be positive");
  if (!(policy.base_step > 0.0)) throw ConfigError("h0 must be positive");
  if (!(nls_step > 0.0)) throw ConfigError("nls_step must be positive");
  if (!(drift_tolerance > 0.0)) throw ConfigError("drift_tolerance must be positive");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  for (double g : gammas) {
    if (g < -2.0 || g > 6.0) throw ConfigError("gammas must lie in [-2, 6]");
  }
  try {
    EquationSpec{EquationKind::kg_eps, epsilons.front(), lambda_kg}.validate();
    EquationSpec{EquationKind::nls, epsilons.front(), lambda_profile}.validate();
    EquationSpec{solve_equation, solve_epsilon, lambda_profile}.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (data.family == DataFamily::rough_sobolev || data.family == DataFamily::lowpass_of) {
    if (data.alpha < 1.0 || data.alpha > 4.0) throw ConfigError("alpha must lie in [1, 4]");
  }
  if (data.v1 != "zero" && data.v1 != "preset") throw ConfigError("data.v1 must be 'zero' or 'preset'");
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("rate fit needs at least 3 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) throw std::invalid_argument("rate fit needs positive entries");
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(points.size());
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("rate fit needs distinct abscissae");
  RateFit fit;
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.points = static_cast<int>(points.size());
  for (const auto& [x, y] : points) {
    fit.residual = std::max(fit.residual, std::abs(std::log(y) - (fit.intercept + fit.slope * std::log(x))));
  }
  return fit;
}

bool ResultRow::operator==(const ResultRow&) const = default;

double SweepResult::summary_value(const std::string& key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return v;
  }
  throw std::out_of_range("no summary entry '" + key + "'");
}

PreparedData prepare_data(const SweepConfig& c, const TorusGrid& grid) {
  const DataSpec& d = c.data;
  PreparedData p;
  auto from_profile = [&](SpectralField v0) {
    p.v0 = std::move(v0);
    p.v0.set_frame(Frame::modulated);
    SpectralField re(grid), im(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      re.values()[i] = 2.0 * p.v0.values()[i].real();
      im.values()[i] = -2.0 * p.v0.values()[i].imag();
    }
    p.u0 = re;
    p.u1 = im;
  };
  auto normalized_rough = [&] {
    SpectralField f = rough_sobolev(grid, 1.0, d.alpha);
    f *= d.delta0 / l2_norm(f);
    return f;
  };
  switch (d.family) {
    case DataFamily::gaussian:
    case DataFamily::preset_v1:
      p.u0 = gaussian(grid, d.amplitude, d.width, d.center);
      p.u1 = gaussian(grid, d.velocity_amplitude, d.width, d.velocity_center);
      p.v0 = compatible_v0(p.u0, p.u1);
      break;
    case DataFamily::chirped_annulus:
      from_profile(chirped_annulus(grid, d.delta0, d.a0, d.b0, d.mollify));
      break;
    case DataFamily::rough_sobolev:
      from_profile(normalized_rough());
      break;
    case DataFamily::lowpass_of: {
      const double eps = c.epsilons.front();
      const double t_end = c.study == Study::growth_in_time || c.study == Study::sharpness_rough
                               ? c.window_delta / (eps * eps)
                               : c.horizon;
      const double n = d.cutoff > 0.0 ? d.cutoff : lowpass_cutoff(eps, t_end);
      from_profile(project_low(normalized_rough(), n));
      break;
    }
  }
  const bool preset = d.v1 == "preset" || d.family == DataFamily::preset_v1;
  p.v1 = preset ? preset_v1(p.v0, c.lambda_profile) : SpectralField(grid, Representation::physical, Frame::modulated);
  return p;
}

double mass_outside_half_box(const SpectralField& f) {
  const SpectralField p = f.to_physical();
  const TorusGrid& g = p.grid();
  double total = 0.0, outside = 0.0;
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const double m = std::norm(p.values()[flat]);
    total += m;
    const auto idx = g.unflatten(flat);
    for (int a = 0; a < g.dim(); ++a) {
      if (std::abs(g.position(a, idx[a])) >= 0.25 * g.extent(a)) {
        outside += m;
        break;
      }
    }
  }
  return total > 0.0 ? outside / total : 0.0;
}

SweepResult run_convergence_sweep(const SweepConfig& c) {
  c.validate();
  SweepResult res;
  res.study = c.study;
  const Pairing pairing = c.study == Study::rate_sw_vs_nls ? Pairing::sw_vs_nls : Pairing::kg_vs_sw;
  std::vector<LegOutput> legs(c.epsilons.size());

  if (c.injection.enabled) {
    for (std::size_t i = 0; i < legs.size(); ++i) {
      const double eps = c.epsilons[i];
      ResultRow row = base_row(c, eps, c.horizon);
      row.err_l2 = c.injection.coefficient * std::pow(eps, c.injection.exponent);
      legs[i].rows.push_back(row);
      legs[i].summary.epsilon = eps;
      legs[i].summary.value = row.err_l2;
    }
  } else {
    const auto times = uniform_times(0.0, c.horizon, c.samples_per_unit);
    run_legs(legs.size(), c.jobs, [&](std::size_t i) {
      legs[i] = with_epsilon(c.epsilons[i], [&] { return run_pair(c, c.epsilons[i], pairing, times); });
    });
  }
  for (auto& leg : legs) {
    res.rows.insert(res.rows.end(), leg.rows.begin(), leg.rows.end());
    res.legs.push_back(leg.summary);
  }
  note_mass_guard(res);
  res.fit = fit_converged(res.legs);
  if (res.fit) add_fit_summary(res, "", *res.fit);
  return res;
}

SweepResult run_growth_in_time(const SweepConfig& c) {
  c.validate();
  SweepResult res;
  res.study = c.study;
  const double eps = c.epsilons.front();
  const double t_max = c.window_delta / (eps * eps);
  if (!(t_max > c.t_min)) throw std::invalid_argument("growth window is empty: window_delta/eps^2 <= t_min");
  const auto times = log_times(c.t_min, t_max, c.t_count);

  LegOutput leg;
  if (c.injection.enabled) {
    leg.summary.epsilon = eps;
    for (double t : times) {
      ResultRow row = base_row(c, eps, t);
      row.err_l2 = c.injection.coefficient * std::pow(eps * eps * t, c.injection.exponent);
      leg.rows.push_back(row);
    }
  } else {
    leg = with_epsilon(eps, [&] { return run_pair(c, eps, c.growth_pairing, times); });
  }

  const bool rough = c.data.family == DataFamily::rough_sobolev || c.data.family == DataFamily::lowpass_of;
  const double alpha = rough ? c.data.alpha : 4.0;
  std::vector<std::pair<double, double>> window, all;
  for (const auto& row : leg.rows) {
    if (!(row.err_l2 > 0.0)) continue;
    all.emplace_back(row.t, row.err_l2);
    if (c.injection.enabled || std::pow(eps * eps * row.t, 0.25 * alpha) > c.dominance_factor * eps * eps) {
      window.emplace_back(row.t, row.err_l2);
    }
  }
  if (window.size() < 3) throw std::invalid_argument("growth dominance window holds fewer than 3 samples");
  res.fit = fit_rate(window);
  if (all.size() >= 3) res.secondary_fit = fit_rate(all);
  leg.summary.value = res.fit->slope;
  leg.summary.secondary = res.secondary_fit ? res.secondary_fit->slope : 0.0;
  res.rows = leg.rows;
  res.legs.push_back(leg.summary);
  note_mass_guard(res);
  add_fit_summary(res, "", *res.fit);
  if (res.secondary_fit) add_fit_summary(res, "all_", *res.secondary_fit);
  res.summary.emplace_back("window_points", static_cast<double>(window.size()));
  res.summary.emplace_back("t_max", t_max);
  return res;
}

SweepResult run_sharpness_chirped(const SweepConfig& c) {
  c.validate();
  if (c.data.family != DataFamily::chirped_annulus) {
    throw ConfigError("sharpness-chirped needs data.family = chirped-annulus");
  }
  SweepResult res;
  res.study = c.study;
  res.warnings = c.data.check();

  // precondition on the data, checked before any solve
  const TorusGrid grid = study_grid(c);
  const PreparedData data = prepare_data(c, grid);
  const SpectralField f = annulus_profile(grid, c.data.a0, c.data.mollify);
  SpectralField f3(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) f3.values()[i] = std::pow(f.values()[i], 3);
  const double defect = defect_functional(data.v0, data.v1);
  const double bound = 0.25 * std::pow(c.data.delta0, 3) * l2_norm(f3);
  res.summary.emplace_back("defect", defect);
  res.summary.emplace_back("defect_bound", bound);
  res.summary.emplace_back("defect_ok", defect >= bound ? 1.0 : 0.0);

  std::vector<LegOutput> legs(c.epsilons.size());
  const auto times = uniform_times(c.horizon - 1.0, c.horizon, c.samples_per_unit);
  if (c.injection.enabled) {
    for (std::size_t i = 0; i < legs.size(); ++i) {
      const double eps = c.epsilons[i];
      ResultRow row = base_row(c, eps, c.horizon);
      row.err_l2 = c.injection.coefficient * std::pow(eps, c.injection.exponent);
      legs[i].rows.push_back(row);
      legs[i].summary.epsilon = eps;
      legs[i].summary.value = row.err_l2;
    }
  } else {
    run_legs(legs.size(), c.jobs, [&](std::size_t i) {
      legs[i] = with_epsilon(c.epsilons[i], [&] { return run_pair(c, c.epsilons[i], Pairing::kg_vs_sw, times); });
    });
  }
  double lo = INFINITY, hi = 0.0;
  for (auto& leg : legs) {
    leg.summary.secondary = leg.summary.value / (leg.summary.epsilon * leg.summary.epsilon);
    lo = std::min(lo, leg.summary.secondary);
    hi = std::max(hi, leg.summary.secondary);
    res.rows.insert(res.rows.end(), leg.rows.begin(), leg.rows.end());
    res.legs.push_back(leg.summary);
  }
  note_mass_guard(res);
  res.summary.emplace_back("ratio_min", lo);
  res.summary.emplace_back("ratio_max", hi);
  res.summary.emplace_back("ratio_spread", lo > 0.0 ? hi / lo : INFINITY);
  res.fit = fit_converged(res.legs);
  if (res.fit) add_fit_summary(res, "", *res.fit);
  return res;
}

SweepResult run_wave_diagnostics(const SweepConfig& c) {
  c.validate();
  SweepResult res;
  res.study = c.study;
  std::vector<LegOutput> legs(c.epsilons.size());
  const auto times = uniform_times(0.0, c.horizon, c.samples_per_unit);

  run_legs(legs.size(), c.jobs, [&](std::size_t i) {
    const double eps = c.epsilons[i];
    legs[i] = with_epsilon(eps, [&] {
      const TorusGrid grid = study_grid(c);
      const PreparedData data = prepare_data(c, grid);
      const SecondOrderState w0 = rescaled_initial_state(data.v0, data.v1, eps);
      std::vector<double> fast;
      for (double t : times) fast.push_back(t / (eps * eps));
      const EquationSpec spec{EquationKind::unit_kg, 1.0, c.lambda_profile};
      StepPolicy policy = c.policy;
      policy.scheme = Scheme::strang_trig;
      const Trajectory traj = solve_unit_kg(w0, spec, fast, policy);
      const WaveTrack track = leftward_smallness_track(traj, eps);
      const ConservedDrift drift = trajectory_drift(traj, spec);

      LegOutput out;
      out.summary.epsilon = eps;
      out.summary.value = track.max_w1_normalized;
      out.summary.secondary = track.max_w2_normalized;
      out.summary.energy_drift = drift.energy;
      out.summary.mass_outside = max_mass_outside(traj);
      out.summary.converged = drift.energy <= c.drift_tolerance;
      for (std::size_t k = 0; k < track.samples.size(); ++k) {
        ResultRow row = base_row(c, eps, times[k]);
        row.w1_l2 = track.samples[k].w1_l2;
        row.w2_l2 = track.samples[k].w2_l2;
        row.energy_drift = drift.energy;
        out.rows.push_back(row);
      }
      return out;
    });
  });

  double w2_lo = INFINITY, w2_hi = 0.0, raw_lo = INFINITY, raw_hi = 0.0;
  std::vector<std::pair<double, double>> raw_w1;
  for (auto& leg : legs) {
    res.rows.insert(res.rows.end(), leg.rows.begin(), leg.rows.end());
    res.legs.push_back(leg.summary);
    w2_lo = std::min(w2_lo, leg.summary.secondary);
    w2_hi = std::max(w2_hi, leg.summary.secondary);
    double raw1 = 0.0, raw2 = 0.0;
    for (const auto& row : leg.rows) {
      raw1 = std::max(raw1, row.w1_l2);
      raw2 = std::max(raw2, row.w2_l2);
    }
    raw_lo = std::min(raw_lo, raw2);
    raw_hi = std::max(raw_hi, raw2);
    if (leg.summary.converged && raw1 > 0.0) raw_w1.emplace_back(leg.summary.epsilon, raw1);
  }
  note_mass_guard(res);
  res.summary.emplace_back("w2_spread", w2_hi / w2_lo);
  res.summary.emplace_back("w2_spread_raw", raw_hi / raw_lo);
  res.fit = fit_converged(res.legs);
  if (res.fit) add_fit_summary(res, "", *res.fit);
  if (raw_w1.size() >= 3) {
    res.secondary_fit = fit_rate(raw_w1);
    add_fit_summary(res, "raw_", *res.secondary_fit);
  }
  return res;
}

SweepResult run_solve(const SweepConfig& c) {
  c.validate();
  SweepResult res;
  res.study = Study::solve;
  const TorusGrid grid = study_grid(c);
  const PreparedData data = prepare_data(c, grid);
  const auto times = uniform_times(0.0, c.horizon, c.samples_per_unit);
  const double eps = c.solve_epsilon;
  EquationSpec spec{c.solve_equation, eps, c.lambda_profile};
  Trajectory traj;
  switch (c.solve_equation) {
    case EquationKind::unit_kg:
      spec.lambda = c.lambda_kg;
      traj = solve_unit_kg(SecondOrderState{data.u0, data.u1, 0.0}, spec, times, c.policy);
      break;
    case EquationKind::kg_eps:
      spec.lambda = c.lambda_kg;
      traj = solve_kg_eps(data.u0, data.u1, spec, times, c.policy);
      break;
    case EquationKind::schrodinger_wave:
      traj = solve_schrodinger_wave(data.v0, data.v1, spec, times, c.policy);
      break;
    case EquationKind::nls:
      traj = solve_nls(data.v0, spec, times, nls_policy(c));
      break;
  }
  const ConservedReport q0 = conserved_quantities(traj.front(), spec);
  LegSummary leg;
  leg.epsilon = eps;
  for (const auto& s : traj) {
    const ConservedReport q = conserved_quantities(s, spec);
    ResultRow row = base_row(c, eps, s.time);
    row.err_l2 = l2_norm(s.position);
    if (q0.kg_energy) row.energy_drift = relative_drift(*q0.kg_energy, *q.kg_energy);
    if (q0.sw_energy) row.energy_drift = relative_drift(*q0.sw_energy, *q.sw_energy);
    if (q0.sw_mass) row.mass_drift = relative_drift(*q0.sw_mass, *q.sw_mass);
    if (q0.nls_mass) row.mass_drift = relative_drift(*q0.nls_mass, *q.nls_mass);
    leg.energy_drift = std::max(leg.energy_drift, row.energy_drift);
    leg.mass_drift = std::max(leg.mass_drift, row.mass_drift);
    res.rows.push_back(row);
  }
  leg.mass_outside = max_mass_outside(traj);
  leg.converged = leg.energy_drift <= c.drift_tolerance && leg.mass_drift <= c.drift_tolerance;
  leg.value = res.rows.back().err_l2;
  res.legs.push_back(leg);
  note_mass_guard(res);
  res.summary.emplace_back("energy_drift", leg.energy_drift);
  res.summary.emplace_back("mass_drift", leg.mass_drift);
  return res;
}

SweepResult run_study(const SweepConfig& c) {
  switch (c.study) {
    case Study::rate_kg_vs_sw:
    case Study::rate_sw_vs_nls:
      return run_convergence_sweep(c);
    case Study::growth_in_time:
    case Study::sharpness_rough:
      return run_growth_in_time(c);
    case Study::sharpness_chirped:
      return run_sharpness_chirped(c);
    case Study::wave_diagnostics:
      return run_wave_diagnostics(c);
    case Study::solve:
      return run_solve(c);
  }
  throw std::invalid_argument("unknown study");
}

std::string to_string(Study study) {
  switch (study) {
    case Study::rate_kg_vs_sw:
      return "rate-kg-vs-sw";
    case Study::rate_sw_vs_nls:
      return "rate-sw-vs-nls";
    case Study::growth_in_time:
      return "growth-in-time";
    case Study::sharpness_chirped:
      return "sharpness-chirped";
    case Study::sharpness_rough:
      return "sharpness-rough";
    case Study::wave_diagnostics:
      return "wave-diagnostics";
    case Study::solve:
      return "solve";
  }
  return "?";
}

}  // namespace kgl
