#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kgl/field.hpp"

namespace kgl {

enum class EquationKind {
  unit_kg,           ///< ∂tt w − Δw + w = −λ|w|²w
  kg_eps,            ///< ε²∂tt u − Δu + ε⁻²u = −λ|u|²u
  schrodinger_wave,  ///< ε²∂tt v + 2i∂t v − Δv = −λ|v|²v
  nls,               ///< 2i∂t v − Δv = −λ|v|²v
};

struct EquationSpec {
  EquationKind kind = EquationKind::unit_kg;
  double epsilon = 1.0;
  double lambda = 1.0;

  /// ε ∈ (0,1], λ ∈ {0} ∪ [1,3].
  void validate() const;
};

enum class Scheme { strang_trig, rescaled_frame, rk4_oracle };

/// automatic: two_thirds when λ > 0, none otherwise.
enum class Dealias { automatic, none, nyquist, two_thirds };

/// 0/1 filter applied to the cubic term; empty when nothing is removed.
/// The two_thirds rule drops |k| > n/3 on any axis, which includes Nyquist.
std::vector<double> dealias_mask(const TorusGrid& grid, Dealias dealias, double lambda);

struct StepPolicy {
  Scheme scheme = Scheme::strang_trig;
  double base_step = 0.05;
  Dealias dealias = Dealias::automatic;

  /// h₀ε² for kg_eps and schrodinger_wave, h₀ otherwise.
  double step_for(const EquationSpec& spec) const;
};

/// (position, ∂t position) at a time. For NLS the velocity is derived from
/// the equation when a trajectory is sampled.
struct SecondOrderState {
  SpectralField position;
  SpectralField velocity;
  double time = 0.0;
};

using Trajectory = std::vector<SecondOrderState>;

/// Strang splitting with exact linear flows in Fourier space.
///
/// step(h) = linear(h/2) ∘ nonlinear(h) ∘ linear(h/2). Both fields of the
/// state must be held in the fourier representation; h may be negative.
class SplitStepper {
 public:
  SplitStepper(const TorusGrid& grid, const EquationSpec& spec, Dealias dealias = Dealias::automatic);

  void step(SecondOrderState& state, double h);
  void linear(SecondOrderState& state, double h);
  void nonlinear(SecondOrderState& state, double h);

  /// Fixed steps of size h, then one shortened step to land on t_target.
  void advance_to(SecondOrderState& state, double t_target, double h);

  const EquationSpec& spec() const { return spec_; }

 private:
  struct LinearFlow {
    std::vector<cplx> m00, m01, m10, m11;
  };
  const LinearFlow& flow(double h);
  void dealias(std::span<cplx> coefficients) const;

  TorusGrid grid_;
  EquationSpec spec_;
  Dealias dealias_;
  std::vector<double> dealias_mask_;  // empty means no filtering
  std::vector<double> xi2_;
  std::map<double, LinearFlow> flows_;
  std::vector<cplx> scratch_;
  std::size_t steps_since_check_ = 0;
};

Trajectory solve_unit_kg(const SecondOrderState& initial, const EquationSpec& spec,
                         std::span<const double> output_times, const StepPolicy& policy);

/// Initial velocity is u1/ε²; the division happens here.
Trajectory solve_kg_eps(const SpectralField& u0, const SpectralField& u1, const EquationSpec& spec,
                        std::span<const double> output_times, const StepPolicy& policy);

/// strang_trig integrates the branch-diagonalized equation directly;
/// rescaled_frame solves unit KG for w = e^{it}𝒮_ε v on the box scaled by
/// 1/ε and maps back.
Trajectory solve_schrodinger_wave(const SpectralField& v0, const SpectralField& v1,
                                  const EquationSpec& spec, std::span<const double> output_times,
                                  const StepPolicy& policy);

Trajectory solve_nls(const SpectralField& v0, const EquationSpec& spec,
                     std::span<const double> output_times, const StepPolicy& policy);

/// Dispatch on spec.kind with an explicit initial state (velocity is the
/// full ∂t of the position, also for kg_eps).
Trajectory solve(const SecondOrderState& initial, const EquationSpec& spec,
                 std::span<const double> output_times, const StepPolicy& policy);

/// Classical RK4 on the full semi-discrete system. Test oracle only:
/// rejects h·max|ω| > 0.1 and grids above 32 points per axis. The cubic
/// term is filtered with the same mask the split stepper uses.
Trajectory rk4_oracle(const EquationSpec& spec, const SecondOrderState& initial,
                      std::span<const double> output_times, double h,
                      Dealias dealias = Dealias::automatic);

/// ∂t v of an NLS solution computed from the equation.
SpectralField nls_time_derivative(const SpectralField& v, double lambda);

struct ConservedReport {
  std::optional<double> kg_energy;
  std::optional<double> sw_energy;
  std::optional<double> sw_mass;
  std::optional<double> nls_mass;
};

ConservedReport conserved_quantities(const SecondOrderState& state, const EquationSpec& spec);

/// |Q(t) − Q(0)| / max(|Q(0)|, 1e-30)
double relative_drift(double initial, double current);

struct ConservedDrift {
  double energy = 0.0;
  double mass = 0.0;
};

/// Max drift over a trajectory of the energy-type and mass-type entries.
ConservedDrift trajectory_drift(const Trajectory& trajectory, const EquationSpec& spec);

std::string to_string(EquationKind kind);
std::string to_string(Scheme scheme);

}  // namespace kgl
