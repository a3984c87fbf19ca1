#include "kgl/multiplier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kgl/kernels.hpp"

namespace kgl {

namespace {

// ⟨ξ⟩ = 3 at |ξ| = √8; the − denominator needs its low-pass to stop short.
const double kResonantRadius = std::sqrt(8.0);

void check_resonance_guard(const MultiplierSpec& m) {
  if (m.kind != SymbolKind::resonance_denominator || m.sign > 0) return;
  if (!m.composed_lowpass || *m.composed_lowpass <= 0.0 || *m.composed_lowpass >= kResonantRadius) {
    throw std::invalid_argument(
        "resonance denominator 1/(<xi>-3) requires a composed low-pass with cutoff below sqrt(8)");
  }
}

double raw_symbol(const MultiplierSpec& m, double xi) {
  const double xi2 = xi * xi;
  switch (m.kind) {
    case SymbolKind::bracket:
      return std::sqrt(1.0 + xi2);
    case SymbolKind::frac_laplacian:
      if (xi == 0.0) return m.gamma == 0.0 ? 1.0 : 0.0;
      return std::pow(xi, m.gamma);
    case SymbolKind::kg_omega: {
      const double e2 = m.epsilon * m.epsilon;
      return std::sqrt(1.0 + e2 * xi2) / e2;
    }
    case SymbolKind::sw_branch: {
      const double e2 = m.epsilon * m.epsilon;
      const double s = std::sqrt(1.0 + e2 * xi2);
      // slow branch written without the 1 − 1 cancellation
      return m.sign > 0 ? xi2 / (1.0 + s) : -(1.0 + s) / e2;
    }
    case SymbolKind::schrodinger_phase:
      return 0.5 * xi2;
    case SymbolKind::resonance_denominator:
      return 1.0 / (std::sqrt(1.0 + xi2) + (m.sign > 0 ? 3.0 : -3.0));
    case SymbolKind::smooth_lowpass:
      return smooth_cutoff(xi / m.cutoff);
    case SymbolKind::sharp_lowpass:
      return xi < m.cutoff ? 1.0 : 0.0;
  }
  return 0.0;
}

std::vector<double> symbol_array(const TorusGrid& grid, const MultiplierSpec& m) {
  check_resonance_guard(m);
  const auto xi2 = grid.xi_squared();
  std::vector<double> s(grid.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = symbol_value(m, std::sqrt(xi2[i]));
  return s;
}

}  // namespace

double smooth_cutoff(double r) {
  if (r <= 0.5) return 1.0;
  if (r >= 1.0) return 0.0;
  const double t = 2.0 * (r - 0.5);
  return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

double symbol_value(const MultiplierSpec& m, double xi_abs) {
  check_resonance_guard(m);
  if (m.composed_lowpass) {
    const double chi = smooth_cutoff(xi_abs / *m.composed_lowpass);
    if (chi == 0.0) return 0.0;
    double s = raw_symbol(m, xi_abs);
    if (m.power != 1.0) s = std::pow(s, m.power);
    return chi * s;
  }
  double s = raw_symbol(m, xi_abs);
  if (m.power != 1.0) s = std::pow(s, m.power);
  return s;
}

SpectralField apply_multiplier(const SpectralField& f, const MultiplierSpec& m) {
  const auto symbol = symbol_array(f.grid(), m);
  SpectralField out = f.to_fourier();
  kernels::scale_by_symbol(out.values(), symbol);
  if (f.representation() == Representation::physical) out.make_physical();
  return out;
}

SpectralField project_low(const SpectralField& f, double cutoff, CutoffMode mode) {
  if (!(cutoff > 0.0)) throw std::invalid_argument("low-pass cutoff N must be positive");
  MultiplierSpec m;
  m.kind = mode == CutoffMode::smooth ? SymbolKind::smooth_lowpass : SymbolKind::sharp_lowpass;
  m.cutoff = cutoff;
  return apply_multiplier(f, m);
}

SpectralField project_high(const SpectralField& f, double cutoff, CutoffMode mode) {
  return f - project_low(f, cutoff, mode);
}

SpectralField laplacian(const SpectralField& f) {
  return cplx(-1.0) * apply_multiplier(f, MultiplierSpec::fractional(2.0));
}

}  // namespace kgl
