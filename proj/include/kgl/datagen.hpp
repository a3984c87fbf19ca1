#pragma once

#include <string>
#include <vector>

#include "kgl/field.hpp"

namespace kgl {

enum class DataFamily { gaussian, chirped_annulus, rough_sobolev, lowpass_of, preset_v1 };

/// Initial-data description as it appears in experiment configs.
struct DataSpec {
  DataFamily family = DataFamily::gaussian;
  // gaussian: u₀ = amplitude·G(center, width), u₁ = velocity_amplitude·G(velocity_center, width)
  double amplitude = 1.0;
  double width = 1.0;
  std::vector<double> center;
  double velocity_amplitude = 0.0;
  std::vector<double> velocity_center;
  // chirped annulus / rough profile
  double delta0 = 0.5;
  double a0 = 1.0;
  double b0 = 0.25;
  double mollify = 0.1;  ///< relative width of the annulus edge smoothing
  double alpha = 2.0;
  // lowpass_of
  double cutoff = 0.0;
  /// v₁ choice for profile equations: "zero" or "preset".
  std::string v1 = "zero";

  /// Warnings about parameter orderings; empty when none.
  std::vector<std::string> check() const;
};

/// amplitude · exp(−|x−center|²/(2 width²)).
SpectralField gaussian(const TorusGrid& grid, double amplitude, double width,
                       const std::vector<double>& center = {});

/// Annulus profile f = |x|⁻¹χ_{a₀≤|x|≤2a₀} with C² edges of width mollify·a₀.
SpectralField annulus_profile(const TorusGrid& grid, double a0, double mollify);

/// δ₀ e^{−ib₀|x|²/2} f. mollify = 0 gives the sharp indicator.
SpectralField chirped_annulus(const TorusGrid& grid, double delta0, double a0, double b0,
                              double mollify);

/// ‖−2Re v₁ + (i/2)v₀³ − (i/4)conj(v₀)³‖_{L²}.
double defect_functional(const SpectralField& v0, const SpectralField& v1);

/// Inverse transform of δ₀⟨ξ⟩₂^{−α−d/2}(ln⟨ξ⟩₂)⁻¹ with ⟨ξ⟩₂ = √(|ξ|²+2).
SpectralField rough_sobolev(const TorusGrid& grid, double delta0, double alpha);

/// Field whose continuous Fourier transform samples are fn(ξ) on the lattice.
SpectralField from_fourier_transform(const TorusGrid& grid,
                                     const std::function<cplx(std::span<const double>)>& fn);

struct LensParams {
  double b = 0.0;
  double t = 0.0;
  double t_b() const { return t / (1.0 + b * t); }
};

/// Closed-form e^{−(i/2)tΔ}(e^{−ib|x|²/2} f) via the pseudo-conformal
/// identity (1+bt)^{−d/2} e^{−ib|x|²/(2(1+bt))} (e^{−(i/2)t_bΔ} f)(x/(1+bt)).
SpectralField lens_transform_exact(const SpectralField& f, const LensParams& params);

/// P_{≤N} v₀ with N = (ε²T)^{−1/4}.
SpectralField lowpass_data(const SpectralField& v0, double epsilon, double horizon);
double lowpass_cutoff(double epsilon, double horizon);

/// (i/2)(−Δv₀ + λ|v₀|²v₀), the v₁ aligned with the NLS profile.
SpectralField preset_v1(const SpectralField& v0, double lambda);

std::string to_string(DataFamily family);

}  // namespace kgl
