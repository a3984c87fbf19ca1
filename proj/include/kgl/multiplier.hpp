#pragma once

#include <optional>

#include "kgl/field.hpp"

namespace kgl {

enum class SymbolKind {
  bracket,                ///< ⟨ξ⟩ = √(1+|ξ|²)
  frac_laplacian,         ///< |ξ|^γ (0 at ξ = 0)
  kg_omega,               ///< ε⁻²√(1+ε²|ξ|²)
  sw_branch,              ///< (−1 ± √(1+ε²|ξ|²))/ε²
  schrodinger_phase,      ///< |ξ|²/2
  resonance_denominator,  ///< 1/(⟨ξ⟩ ± 3)
  smooth_lowpass,         ///< χ(ξ/N)
  sharp_lowpass,          ///< 1 for |ξ| < N
};

enum class CutoffMode { smooth, sharp };

/// A radial Fourier symbol, optionally raised to a power and composed
/// with a low-pass cutoff.
struct MultiplierSpec {
  SymbolKind kind = SymbolKind::bracket;
  double gamma = 0.0;    ///< frac_laplacian exponent
  double epsilon = 1.0;  ///< kg_omega / sw_branch
  double cutoff = 1.0;   ///< N for the lowpass kinds
  int sign = +1;         ///< sw_branch / resonance_denominator branch
  double power = 1.0;    ///< symbol is raised to this power
  /// Smooth P_{≤N} composed onto the symbol. Required for the − branch of
  /// the resonance denominator, which is singular at ⟨ξ⟩ = 3.
  std::optional<double> composed_lowpass;

  static MultiplierSpec bracket_pow(double p) {
    MultiplierSpec m;
    m.power = p;
    return m;
  }
  static MultiplierSpec fractional(double g) {
    MultiplierSpec m;
    m.kind = SymbolKind::frac_laplacian;
    m.gamma = g;
    return m;
  }
};

/// Smooth cutoff profile χ(r): 1 for r ≤ 1/2, 0 for r ≥ 1, C² monotone
/// (1 − smootherstep) in between.
double smooth_cutoff(double r);

/// Symbol value at |ξ|. Throws std::invalid_argument for an unguarded
/// resonance denominator with sign −.
double symbol_value(const MultiplierSpec& m, double xi_abs);

/// Multiply the Fourier coefficients by the symbol; representation preserved.
SpectralField apply_multiplier(const SpectralField& f, const MultiplierSpec& m);

/// P_{≤N} f. Throws std::invalid_argument for N ≤ 0.
SpectralField project_low(const SpectralField& f, double cutoff,
                          CutoffMode mode = CutoffMode::smooth);
/// P_{>N} f = f − P_{≤N} f.
SpectralField project_high(const SpectralField& f, double cutoff,
                           CutoffMode mode = CutoffMode::smooth);

SpectralField laplacian(const SpectralField& f);

}  // namespace kgl
