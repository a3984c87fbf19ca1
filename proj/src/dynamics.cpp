#include "kgl/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kgl/error.hpp"
#include "kgl/fft.hpp"
#include "kgl/kernels.hpp"
#include "kgl/limits.hpp"
#include "kgl/multiplier.hpp"
#include "kgl/norms.hpp"

namespace kgl {

namespace {

constexpr std::size_t kFiniteCheckInterval = 256;
constexpr std::size_t kMaxCachedFlows = 16;

Frame frame_of(EquationKind kind) {
  switch (kind) {
    case EquationKind::unit_kg:
      return Frame::rescaled;
    case EquationKind::kg_eps:
      return Frame::original;
    default:
      return Frame::modulated;
  }
}

bool is_stiff(EquationKind kind) {
  return kind == EquationKind::kg_eps || kind == EquationKind::schrodinger_wave;
}

void require_increasing(std::span<const double> times, double start) {
  double prev = start;
  for (double t : times) {
    if (!(t >= prev - 1e-12) || !std::isfinite(t)) {
      throw std::invalid_argument("output times must be finite, nondecreasing and >= the start time");
    }
    prev = t;
  }
}

SecondOrderState snapshot(const SecondOrderState& s, const EquationSpec& spec) {
  SecondOrderState out{s.position.to_physical(), s.velocity.to_physical(), s.time};
  if (!kernels::all_finite(out.position.values()) || !kernels::all_finite(out.velocity.values())) {
    throw NumericalError(to_string(spec.kind) + " solution became non-finite at t=" +
                         std::to_string(s.time));
  }
  if (spec.kind == EquationKind::nls) out.velocity = nls_time_derivative(out.position, spec.lambda);
  out.position.set_frame(frame_of(spec.kind));
  out.velocity.set_frame(frame_of(spec.kind));
  return out;
}

}  // namespace

std::vector<double> dealias_mask(const TorusGrid& grid, Dealias dealias, double lambda) {
  if (dealias == Dealias::automatic) dealias = lambda > 0.0 ? Dealias::two_thirds : Dealias::none;
  if (dealias == Dealias::none) return {};
  std::vector<double> mask(grid.size(), 1.0);
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const auto idx = grid.unflatten(flat);
    for (int a = 0; a < grid.dim(); ++a) {
      const bool cut = dealias == Dealias::nyquist
                           ? grid.is_nyquist(a, idx[a])
                           : 3 * std::abs(grid.mode_index(a, idx[a])) > grid.points(a);
      if (cut) mask[flat] = 0.0;
    }
  }
  return mask;
}

void EquationSpec::validate() const {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1]");
  }
  if (!(lambda == 0.0 || (lambda >= 1.0 && lambda <= 3.0))) {
    throw std::invalid_argument("lambda must be 0 or lie in [1, 3]");
  }
}

double StepPolicy::step_for(const EquationSpec& spec) const {
  if (!(base_step > 0.0)) throw std::invalid_argument("base step h0 must be positive");
  return is_stiff(spec.kind) ? base_step * spec.epsilon * spec.epsilon : base_step;
}

SplitStepper::SplitStepper(const TorusGrid& grid, const EquationSpec& spec, Dealias dealias)
    : grid_(grid), spec_(spec), dealias_(dealias), scratch_(grid.size()) {
  spec_.validate();
  const auto xi2 = grid_.xi_squared();
  xi2_.assign(xi2.begin(), xi2.end());
  dealias_mask_ = dealias_mask(grid_, dealias_, spec_.lambda);
}

const SplitStepper::LinearFlow& SplitStepper::flow(double h) {
  if (auto it = flows_.find(h); it != flows_.end()) return it->second;
  if (flows_.size() >= kMaxCachedFlows) flows_.clear();

  const std::size_t n = grid_.size();
  LinearFlow f;
  f.m00.resize(n);
  f.m01.resize(n);
  f.m10.resize(n);
  f.m11.resize(n);
  const double e2 = spec_.epsilon * spec_.epsilon;
  const cplx I(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi2 = xi2_[i];
    switch (spec_.kind) {
      case EquationKind::unit_kg:
      case EquationKind::kg_eps: {
        const double w = spec_.kind == EquationKind::unit_kg ? std::sqrt(1.0 + xi2)
                                                             : std::sqrt(1.0 + e2 * xi2) / e2;
        const double c = std::cos(h * w);
        const double s = std::sin(h * w);
        f.m00[i] = c;
        f.m01[i] = s / w;
        f.m10[i] = -w * s;
        f.m11[i] = c;
        break;
      }
      case EquationKind::schrodinger_wave: {
        const double root = std::sqrt(1.0 + e2 * xi2);
        const double wp = xi2 / (1.0 + root);
        const double wm = -(1.0 + root) / e2;
        const double d = wp - wm;
        const cplx ep = std::polar(1.0, wp * h);
        const cplx em = std::polar(1.0, wm * h);
        f.m00[i] = (wp * em - wm * ep) / d;
        f.m01[i] = I * (em - ep) / d;
        f.m10[i] = I * wp * wm * (em - ep) / d;
        f.m11[i] = (wp * ep - wm * em) / d;
        break;
      }
      case EquationKind::nls:
        f.m00[i] = std::polar(1.0, 0.5 * xi2 * h);
        f.m01[i] = 0.0;
        f.m10[i] = 0.0;
        f.m11[i] = 1.0;
        break;
    }
  }
  return flows_.emplace(h, std::move(f)).first->second;
}

void SplitStepper::dealias(std::span<cplx> coefficients) const {
  if (!dealias_mask_.empty()) kernels::scale_by_symbol(coefficients, dealias_mask_);
}

void SplitStepper::linear(SecondOrderState& state, double h) {
  const auto& f = flow(h);
  kernels::apply_2x2(state.position.values(), state.velocity.values(), f.m00, f.m01, f.m10, f.m11);
}

void SplitStepper::nonlinear(SecondOrderState& state, double h) {
  if (spec_.lambda == 0.0) return;
  std::span<cplx> buf(scratch_);
  const auto pos = state.position.values();
  std::copy(pos.begin(), pos.end(), buf.begin());
  fft::inverse(grid_, buf);

  if (spec_.kind == EquationKind::nls) {
    // exact solution of 2i v_t = −λ|v|²v with |v| frozen
    kernels::phase_rotate(buf, 0.5 * spec_.lambda * h);
    fft::forward(grid_, buf);
    dealias(buf);
    std::copy(buf.begin(), buf.end(), pos.begin());
    return;
  }

  const double e2 = spec_.epsilon * spec_.epsilon;
  const double coeff = spec_.kind == EquationKind::unit_kg ? spec_.lambda : spec_.lambda / e2;
  kernels::cubic(buf, buf, coeff);
  fft::forward(grid_, buf);
  dealias(buf);
  kernels::axpy(state.velocity.values(), -h, buf);
}

void SplitStepper::step(SecondOrderState& state, double h) {
  if (state.position.representation() != Representation::fourier ||
      state.velocity.representation() != Representation::fourier) {
    throw std::invalid_argument("SplitStepper works on Fourier-represented states");
  }
  linear(state, 0.5 * h);
  nonlinear(state, h);
  linear(state, 0.5 * h);
  state.time += h;
  if (++steps_since_check_ >= kFiniteCheckInterval) {
    steps_since_check_ = 0;
    if (!kernels::all_finite(state.position.values())) {
      throw NumericalError(to_string(spec_.kind) + " blow-up near t=" + std::to_string(state.time));
    }
  }
}

void SplitStepper::advance_to(SecondOrderState& state, double t_target, double h) {
  const double t0 = state.time;
  const double span = t_target - t0;
  if (span <= 0.0) {
    state.time = std::max(state.time, t_target);
    return;
  }
  const auto full = static_cast<long long>(std::floor(span / h + 1e-9));
  for (long long i = 0; i < full; ++i) step(state, h);
  const double rest = t_target - (t0 + static_cast<double>(full) * h);
  if (rest > 1e-9 * h) step(state, rest);
  state.time = t_target;
}

Trajectory solve(const SecondOrderState& initial, const EquationSpec& spec,
                 std::span<const double> output_times, const StepPolicy& policy) {
  spec.validate();
  initial.position.require_same_grid(initial.velocity);
  require_increasing(output_times, initial.time);
  const double h = policy.step_for(spec);

  if (policy.scheme == Scheme::rk4_oracle) return rk4_oracle(spec, initial, output_times, h, policy.dealias);
  if (is_stiff(spec.kind) && h > 0.5 * spec.epsilon * spec.epsilon) {
    throw std::invalid_argument("step h > eps^2/2 leaves the fast modulation unresolved");
  }
  if (policy.scheme == Scheme::rescaled_frame && spec.kind == EquationKind::schrodinger_wave) {
    if (initial.time != 0.0) throw std::invalid_argument("rescaled-frame solve starts at t = 0");
    return solve_schrodinger_wave(initial.position, initial.velocity, spec, output_times, policy);
  }

  SplitStepper stepper(initial.position.grid(), spec, policy.dealias);
  SecondOrderState state{initial.position.to_fourier(), initial.velocity.to_fourier(), initial.time};
  if (spec.kind == EquationKind::nls) state.velocity = SpectralField(state.position.grid(), Representation::fourier);

  Trajectory out;
  out.reserve(output_times.size());
  for (double t : output_times) {
    stepper.advance_to(state, t, h);
    out.push_back(snapshot(state, spec));
  }
  return out;
}

Trajectory solve_unit_kg(const SecondOrderState& initial, const EquationSpec& spec,
                         std::span<const double> output_times, const StepPolicy& policy) {
  if (spec.kind != EquationKind::unit_kg) throw std::invalid_argument("solve_unit_kg needs a unit-kg spec");
  return solve(initial, spec, output_times, policy);
}

Trajectory solve_kg_eps(const SpectralField& u0, const SpectralField& u1, const EquationSpec& spec,
                        std::span<const double> output_times, const StepPolicy& policy) {
  if (spec.kind != EquationKind::kg_eps) throw std::invalid_argument("solve_kg_eps needs a kg-eps spec");
  spec.validate();
  SpectralField velocity = u1.to_physical();
  velocity *= 1.0 / (spec.epsilon * spec.epsilon);
  return solve(SecondOrderState{u0.to_physical(), velocity, 0.0}, spec, output_times, policy);
}

Trajectory solve_schrodinger_wave(const SpectralField& v0, const SpectralField& v1,
                                  const EquationSpec& spec, std::span<const double> output_times,
                                  const StepPolicy& policy) {
  if (spec.kind != EquationKind::schrodinger_wave) {
    throw std::invalid_argument("solve_schrodinger_wave needs a schrodinger-wave spec");
  }
  spec.validate();
  if (policy.scheme != Scheme::rescaled_frame) {
    return solve(SecondOrderState{v0.to_physical(), v1.to_physical(), 0.0}, spec, output_times, policy);
  }
  require_increasing(output_times, 0.0);

  // w = e^{is} 𝒮_ε v on the box scaled by 1/ε, with s = t/ε².
  const double eps = spec.epsilon;
  const double e2 = eps * eps;
  const SecondOrderState w0 = rescaled_initial_state(v0, v1, eps);
  std::vector<double> fast_times;
  fast_times.reserve(output_times.size());
  for (double t : output_times) fast_times.push_back(t / e2);
  StepPolicy unit_policy = policy;
  unit_policy.scheme = Scheme::strang_trig;
  const EquationSpec unit{EquationKind::unit_kg, 1.0, spec.lambda};
  const Trajectory fast = solve(w0, unit, fast_times, unit_policy);

  const ScalingOp back{eps, ScaleDirection::inverse};
  const TorusGrid& target = v0.grid();
  Trajectory out;
  out.reserve(fast.size());
  for (std::size_t k = 0; k < fast.size(); ++k) {
    const double s = fast_times[k];
    const cplx phase = std::polar(1.0, -s);
    SpectralField h = phase * fast[k].position;
    SpectralField hs = phase * (fast[k].velocity - cplx(0.0, 1.0) * fast[k].position);
    SecondOrderState st{scale_field(h, back, target), scale_field(hs, back, target), output_times[k]};
    st.velocity *= 1.0 / e2;
    st.position.set_frame(Frame::modulated);
    st.velocity.set_frame(Frame::modulated);
    out.push_back(std::move(st));
  }
  return out;
}

Trajectory solve_nls(const SpectralField& v0, const EquationSpec& spec,
                     std::span<const double> output_times, const StepPolicy& policy) {
  if (spec.kind != EquationKind::nls) throw std::invalid_argument("solve_nls needs an nls spec");
  return solve(SecondOrderState{v0.to_physical(), SpectralField(v0.grid()), 0.0}, spec, output_times,
               policy);
}

SpectralField nls_time_derivative(const SpectralField& v, double lambda) {
  SpectralField vp = v.to_physical();
  SpectralField cube(vp.grid());
  kernels::cubic(vp.values(), cube.values(), lambda);
  SpectralField rhs = laplacian(vp) - cube;
  rhs *= 1.0 / cplx(0.0, 2.0);
  rhs.set_frame(v.frame());
  return rhs;
}

ConservedReport conserved_quantities(const SecondOrderState& state, const EquationSpec& spec) {
  ConservedReport r;
  const SpectralField& x = state.position;
  const double quartic = std::pow(lp_norm(x, 4.0), 4.0);
  const double grad2 = std::pow(sobolev_norm(x, 1.0, true), 2.0);
  const double mass = std::pow(l2_norm(x), 2.0);
  const double e2 = spec.epsilon * spec.epsilon;
  switch (spec.kind) {
    case EquationKind::unit_kg:
      r.kg_energy = std::pow(l2_norm(state.velocity), 2.0) + grad2 + mass + 0.5 * spec.lambda * quartic;
      break;
    case EquationKind::kg_eps:
      r.kg_energy = e2 * std::pow(l2_norm(state.velocity), 2.0) + grad2 + mass / e2 +
                    0.5 * spec.lambda * quartic;
      break;
    case EquationKind::schrodinger_wave: {
      r.sw_energy = e2 * std::pow(l2_norm(state.velocity), 2.0) + grad2 + 0.5 * spec.lambda * quartic;
      const cplx vt_vbar = inner_product(state.velocity, x);
      r.sw_mass = e2 * vt_vbar.imag() + mass;
      break;
    }
    case EquationKind::nls:
      r.nls_mass = mass;
      break;
  }
  return r;
}

double relative_drift(double initial, double current) {
  return std::abs(current - initial) / std::max(std::abs(initial), 1e-30);
}

ConservedDrift trajectory_drift(const Trajectory& trajectory, const EquationSpec& spec) {
  ConservedDrift d;
  if (trajectory.empty()) return d;
  const ConservedReport r0 = conserved_quantities(trajectory.front(), spec);
  for (const auto& s : trajectory) {
    const ConservedReport r = conserved_quantities(s, spec);
    if (r0.kg_energy) d.energy = std::max(d.energy, relative_drift(*r0.kg_energy, *r.kg_energy));
    if (r0.sw_energy) d.energy = std::max(d.energy, relative_drift(*r0.sw_energy, *r.sw_energy));
    if (r0.sw_mass) d.mass = std::max(d.mass, relative_drift(*r0.sw_mass, *r.sw_mass));
    if (r0.nls_mass) d.mass = std::max(d.mass, relative_drift(*r0.nls_mass, *r.nls_mass));
  }
  return d;
}

std::string to_string(EquationKind kind) {
  switch (kind) {
    case EquationKind::unit_kg:
      return "unit-kg";
    case EquationKind::kg_eps:
      return "kg-eps";
    case EquationKind::schrodinger_wave:
      return "schrodinger-wave";
    case EquationKind::nls:
      return "nls";
  }
  return "?";
}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::strang_trig:
      return "strang-trig";
    case Scheme::rescaled_frame:
      return "rescaled-frame";
    case Scheme::rk4_oracle:
      return "rk4-oracle";
  }
  return "?";
}

}  // namespace kgl
