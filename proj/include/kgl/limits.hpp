#pragma once

#include <map>
#include <vector>

#include "kgl/dynamics.hpp"

namespace kgl {

enum class ScaleDirection { forward, inverse };

/// forward: 𝒮_ε f(x) = ε f(εx) (time law t ↦ ε²t); inverse undoes it.
struct ScalingOp {
  double epsilon = 1.0;
  ScaleDirection direction = ScaleDirection::forward;
};

/// The box that holds 𝒮_ε f: extent divided by ε (forward) or multiplied
/// (inverse), same point count, so the lattice maps onto itself.
TorusGrid scaled_grid(const TorusGrid& grid, const ScalingOp& op);

/// Fourier-interpolated resampling of ε f(εx) (or ε⁻¹ f(x/ε)) onto target.
/// Samples falling outside the source box are zero. Throws
/// std::invalid_argument when more than 1e-8 of the expected mass is lost.
SpectralField scale_field(const SpectralField& f, const ScalingOp& op, const TorusGrid& target);
SpectralField scale_field(const SpectralField& f, const ScalingOp& op);

/// Evaluate the trigonometric interpolant of f at x_j / factor on the
/// grid of f, per axis (x ↦ f(x/factor)); zero outside the box.
SpectralField dilate(const SpectralField& f, double factor, const TorusGrid& target);

/// v₀ = (u₀ − i u₁)/2.
SpectralField compatible_v0(const SpectralField& u0, const SpectralField& u1);

/// e^{it/ε²} v + e^{−it/ε²} conj(v).
SpectralField wkb_reconstruct(const SpectralField& v, double t, double epsilon);

enum class Pairing {
  kg_vs_sw,   ///< u^ε against the Schrödinger-wave profile
  kg_vs_nls,  ///< u^ε against the NLS profile
  sw_vs_nls,  ///< ṽ^ε − ṽ, no reconstruction
};

struct RemainderRecord {
  double time = 0.0;
  double l2_error = 0.0;
  std::map<double, double> sobolev_error;
  Pairing pairing = Pairing::kg_vs_sw;
};

/// Error at one time. For kg_* pairings `reference` is u^ε and the profile
/// is reconstructed; for sw_vs_nls the two positions are differenced.
RemainderRecord remainder(const SecondOrderState& reference, const SecondOrderState& profile,
                          double epsilon, Pairing pairing, const std::vector<double>& gammas = {});

/// Remainders at every time the two trajectories share. Throws
/// std::invalid_argument when a sample time is missing from either.
std::vector<RemainderRecord> remainder(const Trajectory& reference, const Trajectory& profile,
                                       double epsilon, Pairing pairing,
                                       const std::vector<double>& gammas = {});

struct WaveDecomposition {
  SpectralField leftward;   ///< W₁ = ⟨∇⟩⁻¹(∂t − i⟨∇⟩)w
  SpectralField rightward;  ///< W₂ = ⟨∇⟩⁻¹(∂t + i⟨∇⟩)w
  Frame source_frame = Frame::rescaled;
};

WaveDecomposition wave_decompose(const SecondOrderState& state);
/// w = (i/2)(W₁ − W₂), ∂t w = ½⟨∇⟩(W₁ + W₂).
SecondOrderState wave_reconstruct(const WaveDecomposition& waves, double time = 0.0);

struct WaveSample {
  double time = 0.0;
  double w1_l2 = 0.0;
  double w2_l2 = 0.0;
  /// ε^{d/2−1}‖W_j‖, the norm of 𝒮_ε⁻¹ W_j; equal to the raw norm in d=2.
  double w1_normalized = 0.0;
  double w2_normalized = 0.0;
};

struct WaveTrack {
  std::vector<WaveSample> samples;
  double max_w1 = 0.0;
  double max_w2 = 0.0;
  double max_w1_normalized = 0.0;
  double max_w2_normalized = 0.0;
};

WaveTrack leftward_smallness_track(const Trajectory& unit_kg, double epsilon);

/// Unit-KG initial state (𝒮_ε v₀, i𝒮_ε v₀ + ε²𝒮_ε v₁) on the scaled box.
SecondOrderState rescaled_initial_state(const SpectralField& v0, const SpectralField& v1,
                                        double epsilon);

/// −2 Re ∂t v(0) = −Im(Δv₀ − λ|v₀|²v₀) for the NLS profile.
SpectralField nls_remainder_initial_velocity(const SpectralField& v0, double lambda);

struct BoundaryTerm {
  SpectralField resonant;   ///< (⟨∇⟩−3)⁻¹⟨∇⟩⁻¹P_{≤1}(h³)
  SpectralField companion;  ///< (⟨∇⟩+3)⁻¹⟨∇⟩⁻¹P_{≤1}(conj(h)³)
  SpectralField total() const { return resonant + companion; }
};

BoundaryTerm resonance_boundary_term(const SpectralField& h);

/// ‖∂tt w − Δw + w + λ|w|²w‖_{L²} at the middle sample of three equally
/// spaced unit-KG states, with a centered second difference in time.
double unit_kg_residual(const SecondOrderState& before, const SecondOrderState& middle,
                        const SecondOrderState& after, double lambda);

std::string to_string(Pairing pairing);

}  // namespace kgl
