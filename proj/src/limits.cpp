#include "kgl/limits.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kgl/kernels.hpp"
#include "kgl/multiplier.hpp"
#include "kgl/norms.hpp"

namespace kgl {

namespace {

constexpr double kMassLossGuard = 1e-8;

bool same_lattice(const TorusGrid& a, const TorusGrid& b, double c) {
  if (a.dim() != b.dim()) return false;
  for (int ax = 0; ax < a.dim(); ++ax) {
    if (a.points(ax) != b.points(ax)) return false;
    if (std::abs(c * b.extent(ax) - a.extent(ax)) > 1e-12 * a.extent(ax)) return false;
  }
  return true;
}

// Fraction of ‖f‖² at source points outside the box of half-widths c·L'/2.
double mass_outside_cover(const SpectralField& f, const TorusGrid& target, double c) {
  const SpectralField p = f.to_physical();
  const TorusGrid& g = p.grid();
  double total = 0.0;
  double lost = 0.0;
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const double m = std::norm(p.values()[flat]);
    total += m;
    const auto idx = g.unflatten(flat);
    for (int a = 0; a < g.dim(); ++a) {
      const double half = 0.5 * c * target.extent(a);
      const double x = g.position(a, idx[a]);
      if (x < -half * (1.0 + 1e-12) || x >= half * (1.0 + 1e-12)) {
        lost += m;
        break;
      }
    }
  }
  return total > 0.0 ? lost / total : 0.0;
}

// g(y) = amp · f(c·y) on target, by separable evaluation of the
// trigonometric interpolant of f; zero where c·y leaves the source box.
SpectralField resample(const SpectralField& f, double c, double amp, const TorusGrid& target) {
  const TorusGrid& src = f.grid();
  if (src.dim() != target.dim()) throw std::invalid_argument("resample: dimension mismatch");
  if (same_lattice(src, target, c)) {
    const SpectralField p = f.to_physical();
    SpectralField out(target, std::vector<cplx>(p.values().begin(), p.values().end()),
                      Representation::physical, f.frame());
    out *= amp;
    return out;
  }
  if (mass_outside_cover(f, target, c) > kMassLossGuard) {
    throw std::invalid_argument("target box too small: resampling loses more than 1e-8 of the mass");
  }

  const int d = src.dim();
  std::array<std::size_t, TorusGrid::kMaxDim> shape{1, 1, 1};
  for (int a = 0; a < d; ++a) shape[a] = static_cast<std::size_t>(src.points(a));
  SpectralField coeffs = f.to_fourier();
  std::vector<cplx> cur(coeffs.values().begin(), coeffs.values().end());

  for (int a = 0; a < d; ++a) {
    const int n = src.points(a);
    const int m = target.points(a);
    const double L = src.extent(a);
    std::vector<cplx> E(static_cast<std::size_t>(m) * n, cplx(0.0));
    for (int j = 0; j < m; ++j) {
      const double s = c * target.position(a, j);
      if (s < -0.5 * L * (1.0 + 1e-12) || s > 0.5 * L * (1.0 + 1e-12)) continue;
      for (int k = 0; k < n; ++k) {
        const double phase = src.wavenumber(a, k) * (s + 0.5 * L);
        E[static_cast<std::size_t>(j) * n + k] =
            src.is_nyquist(a, k) ? cplx(std::cos(phase) / n) : std::polar(1.0 / n, phase);
      }
    }
    std::size_t outer = 1, inner = 1;
    for (int b = 0; b < a; ++b) outer *= shape[b];
    for (int b = a + 1; b < d; ++b) inner *= shape[b];
    std::vector<cplx> next(outer * static_cast<std::size_t>(m) * inner, cplx(0.0));
#pragma omp parallel for collapse(2) schedule(static)
    for (std::size_t o = 0; o < outer; ++o) {
      for (int j = 0; j < m; ++j) {
        const cplx* row = &E[static_cast<std::size_t>(j) * n];
        cplx* dst = &next[(o * m + j) * inner];
        for (int k = 0; k < n; ++k) {
          if (row[k] == cplx(0.0)) continue;
          const cplx* srcp = &cur[(o * n + k) * inner];
          for (std::size_t i = 0; i < inner; ++i) dst[i] += row[k] * srcp[i];
        }
      }
    }
    cur = std::move(next);
    shape[a] = static_cast<std::size_t>(m);
  }
  SpectralField out(target, std::move(cur), Representation::physical, f.frame());
  out *= amp;
  return out;
}

double pairing_time_tol(double t) { return 1e-9 * std::max(1.0, std::abs(t)); }

}  // namespace

TorusGrid scaled_grid(const TorusGrid& grid, const ScalingOp& op) {
  if (!(op.epsilon > 0.0 && op.epsilon <= 1.0)) throw std::invalid_argument("scaling epsilon must lie in (0, 1]");
  const double factor = op.direction == ScaleDirection::forward ? 1.0 / op.epsilon : op.epsilon;
  std::vector<double> extents;
  std::vector<int> points;
  for (int a = 0; a < grid.dim(); ++a) {
    extents.push_back(grid.extent(a) * factor);
    points.push_back(grid.points(a));
  }
  return make_grid(extents, points);
}

SpectralField scale_field(const SpectralField& f, const ScalingOp& op, const TorusGrid& target) {
  if (!(op.epsilon > 0.0 && op.epsilon <= 1.0)) throw std::invalid_argument("scaling epsilon must lie in (0, 1]");
  const double c = op.direction == ScaleDirection::forward ? op.epsilon : 1.0 / op.epsilon;
  return resample(f, c, c, target);
}

SpectralField scale_field(const SpectralField& f, const ScalingOp& op) {
  return scale_field(f, op, scaled_grid(f.grid(), op));
}

SpectralField dilate(const SpectralField& f, double factor, const TorusGrid& target) {
  if (!(factor > 0.0)) throw std::invalid_argument("dilation factor must be positive");
  return resample(f, 1.0 / factor, 1.0, target);
}

SpectralField compatible_v0(const SpectralField& u0, const SpectralField& u1) {
  u0.require_same_grid(u1);
  SpectralField v = u0.to_physical() - cplx(0.0, 1.0) * u1.to_physical();
  v *= 0.5;
  v.set_frame(Frame::modulated);
  return v;
}

SpectralField wkb_reconstruct(const SpectralField& v, double t, double epsilon) {
  const SpectralField p = v.to_physical();
  const cplx phase = std::polar(1.0, t / (epsilon * epsilon));
  SpectralField out(p.grid(), Representation::physical, Frame::original);
  auto src = p.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const cplx a = phase * src[i];
    dst[i] = a + std::conj(a);
  }
  return out;
}

RemainderRecord remainder(const SecondOrderState& reference, const SecondOrderState& profile,
                          double epsilon, Pairing pairing, const std::vector<double>& gammas) {
  reference.position.require_same_grid(profile.position);
  if (std::abs(reference.time - profile.time) > pairing_time_tol(reference.time)) {
    throw std::invalid_argument("remainder: states sampled at different times");
  }
  SpectralField diff = pairing == Pairing::sw_vs_nls
                           ? reference.position.to_physical() - profile.position.to_physical()
                           : reference.position.to_physical() -
                                 wkb_reconstruct(profile.position, profile.time, epsilon);
  RemainderRecord r;
  r.time = reference.time;
  r.pairing = pairing;
  r.l2_error = l2_norm(diff);
  for (double g : gammas) r.sobolev_error[g] = sobolev_norm(diff, g, false);
  return r;
}

std::vector<RemainderRecord> remainder(const Trajectory& reference, const Trajectory& profile,
                                       double epsilon, Pairing pairing,
                                       const std::vector<double>& gammas) {
  if (reference.size() != profile.size()) {
    throw std::invalid_argument("remainder: trajectories have different sample times");
  }
  std::vector<RemainderRecord> out;
  out.reserve(reference.size());
  std::size_t j = 0;
  for (const auto& ref : reference) {
    while (j < profile.size() && profile[j].time < ref.time - pairing_time_tol(ref.time)) ++j;
    if (j == profile.size() || std::abs(profile[j].time - ref.time) > pairing_time_tol(ref.time)) {
      throw std::invalid_argument("remainder: time " + std::to_string(ref.time) +
                                  " missing from the profile trajectory");
    }
    out.push_back(remainder(ref, profile[j], epsilon, pairing, gammas));
    ++j;
  }
  return out;
}

WaveDecomposition wave_decompose(const SecondOrderState& state) {
  state.position.require_same_grid(state.velocity);
  const SpectralField w = state.position.to_fourier();
  const SpectralField vt = apply_multiplier(state.velocity.to_fourier(), MultiplierSpec::bracket_pow(-1.0));
  const SpectralField iw = cplx(0.0, 1.0) * w;
  WaveDecomposition out{(vt - iw).to_physical(), (vt + iw).to_physical(), state.position.frame()};
  return out;
}

SecondOrderState wave_reconstruct(const WaveDecomposition& waves, double time) {
  SpectralField w = cplx(0.0, 0.5) * (waves.leftward - waves.rightward);
  SpectralField wt = apply_multiplier(cplx(0.5) * (waves.leftward + waves.rightward),
                                      MultiplierSpec::bracket_pow(1.0));
  w.set_frame(waves.source_frame);
  wt.set_frame(waves.source_frame);
  return SecondOrderState{w.to_physical(), wt.to_physical(), time};
}

WaveTrack leftward_smallness_track(const Trajectory& unit_kg, double epsilon) {
  WaveTrack track;
  for (const auto& s : unit_kg) {
    const WaveDecomposition waves = wave_decompose(s);
    WaveSample sample;
    sample.time = s.time;
    sample.w1_l2 = l2_norm(waves.leftward);
    sample.w2_l2 = l2_norm(waves.rightward);
    const double norm_factor = std::pow(epsilon, 0.5 * s.position.grid().dim() - 1.0);
    sample.w1_normalized = norm_factor * sample.w1_l2;
    sample.w2_normalized = norm_factor * sample.w2_l2;
    track.max_w1 = std::max(track.max_w1, sample.w1_l2);
    track.max_w2 = std::max(track.max_w2, sample.w2_l2);
    track.max_w1_normalized = std::max(track.max_w1_normalized, sample.w1_normalized);
    track.max_w2_normalized = std::max(track.max_w2_normalized, sample.w2_normalized);
    track.samples.push_back(sample);
  }
  return track;
}

SecondOrderState rescaled_initial_state(const SpectralField& v0, const SpectralField& v1,
                                        double epsilon) {
  v0.require_same_grid(v1);
  const ScalingOp fwd{epsilon, ScaleDirection::forward};
  const TorusGrid target = scaled_grid(v0.grid(), fwd);
  SpectralField sv0 = scale_field(v0, fwd, target);
  SpectralField sv1 = scale_field(v1, fwd, target);
  SpectralField velocity = cplx(0.0, 1.0) * sv0 + cplx(epsilon * epsilon) * sv1;
  sv0.set_frame(Frame::rescaled);
  velocity.set_frame(Frame::rescaled);
  return SecondOrderState{sv0, velocity, 0.0};
}

SpectralField nls_remainder_initial_velocity(const SpectralField& v0, double lambda) {
  const SpectralField p = v0.to_physical();
  SpectralField cube(p.grid());
  kernels::cubic(p.values(), cube.values(), lambda);
  const SpectralField inner = laplacian(p) - cube;
  SpectralField out(p.grid(), Representation::physical, Frame::modulated);
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] = -inner.values()[i].imag();
  return out;
}

BoundaryTerm resonance_boundary_term(const SpectralField& h) {
  const SpectralField p = h.to_physical();
  SpectralField cube(p.grid());
  SpectralField conj_cube(p.grid());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const cplx v = p.values()[i];
    cube.values()[i] = v * v * v;
    conj_cube.values()[i] = std::conj(v * v * v);
  }
  MultiplierSpec plus;
  plus.kind = SymbolKind::resonance_denominator;
  plus.composed_lowpass = 1.0;
  MultiplierSpec minus = plus;
  minus.sign = -1;
  const auto inv_bracket = MultiplierSpec::bracket_pow(-1.0);
  return BoundaryTerm{apply_multiplier(apply_multiplier(cube, minus), inv_bracket),
                      apply_multiplier(apply_multiplier(conj_cube, plus), inv_bracket)};
}

double unit_kg_residual(const SecondOrderState& before, const SecondOrderState& middle,
                        const SecondOrderState& after, double lambda) {
  const double dt = middle.time - before.time;
  if (!(dt > 0.0) || std::abs((after.time - middle.time) - dt) > 1e-9 * dt) {
    throw std::invalid_argument("unit_kg_residual needs three equally spaced samples");
  }
  const SpectralField w = middle.position.to_physical();
  SpectralField wtt = before.position.to_physical() + after.position.to_physical();
  wtt -= cplx(2.0) * w;
  wtt *= 1.0 / (dt * dt);
  SpectralField cube(w.grid());
  kernels::cubic(w.values(), cube.values(), lambda);
  const SpectralField res = wtt - laplacian(w) + w + cube;
  return l2_norm(res);
}

std::string to_string(Pairing pairing) {
  switch (pairing) {
    case Pairing::kg_vs_sw:
      return "kg-vs-sw";
    case Pairing::kg_vs_nls:
      return "kg-vs-nls";
    case Pairing::sw_vs_nls:
      return "sw-vs-nls";
  }
  return "?";
}

}  // namespace kgl
