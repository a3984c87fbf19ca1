// Split-step solvers: closed forms, oracle agreement and structural properties.

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "kgl/datagen.hpp"
#include "kgl/dynamics.hpp"
#include "kgl/error.hpp"
#include "kgl/experiments.hpp"
#include "kgl/multiplier.hpp"
#include "kgl/norms.hpp"

namespace {

using kgl::cplx;
using kgl::EquationKind;
using kgl::EquationSpec;
using kgl::SecondOrderState;
using kgl::SpectralField;
using kgl::StepPolicy;

constexpr double kPi = std::numbers::pi;

double rel(const SpectralField& a, const SpectralField& b) {
  return kgl::l2_norm(a - b) / std::max(kgl::l2_norm(b), 1e-300);
}

StepPolicy policy(double h0) {
  StepPolicy p;
  p.base_step = h0;
  return p;
}

SpectralField constant(const kgl::TorusGrid& g, cplx c) {
  return SpectralField::from_function(g, [c](auto) { return c; });
}

TEST(EquationSpec, Validation) {
  EXPECT_NO_THROW((EquationSpec{EquationKind::unit_kg, 1.0, 0.0}.validate()));
  EXPECT_NO_THROW((EquationSpec{EquationKind::kg_eps, 0.1, 3.0}.validate()));
  EXPECT_THROW((EquationSpec{EquationKind::kg_eps, 0.0, 1.0}.validate()), std::invalid_argument);
  EXPECT_THROW((EquationSpec{EquationKind::kg_eps, 1.5, 1.0}.validate()), std::invalid_argument);
  EXPECT_THROW((EquationSpec{EquationKind::nls, 1.0, 0.5}.validate()), std::invalid_argument);
}

TEST(StepPolicy, StiffScaling) {
  const StepPolicy p = policy(0.05);
  EXPECT_DOUBLE_EQ(p.step_for({EquationKind::kg_eps, 0.25, 1.0}), 0.05 / 16);
  EXPECT_DOUBLE_EQ(p.step_for({EquationKind::schrodinger_wave, 0.5, 1.0}), 0.05 / 4);
  EXPECT_DOUBLE_EQ(p.step_for({EquationKind::unit_kg, 0.25, 1.0}), 0.05);
  EXPECT_THROW(policy(0.0).step_for({}), std::invalid_argument);
}

TEST(StepPolicy, UnresolvedModulationRejected) {
  const kgl::TorusGrid g = kgl::make_grid(1, 10.0, 16);
  const std::vector<double> t{0.1};
  const SpectralField u0 = kgl::gaussian(g, 1.0, 1.0);
  EXPECT_THROW(kgl::solve_kg_eps(u0, SpectralField(g), {EquationKind::kg_eps, 0.25, 1.0}, t, policy(0.6)),
               std::invalid_argument);
}

TEST(Dealias, TwoThirdsIncludesNyquist) {
  const kgl::TorusGrid g = kgl::make_grid(1, 10.0, 32);
  const auto mask = kgl::dealias_mask(g, kgl::Dealias::automatic, 1.0);
  ASSERT_EQ(mask.size(), 32u);
  EXPECT_EQ(mask[16], 0.0);
  EXPECT_EQ(mask[10], 1.0);   // 30 ≤ 32
  EXPECT_EQ(mask[11], 0.0);   // 33 > 32
  EXPECT_TRUE(kgl::dealias_mask(g, kgl::Dealias::automatic, 0.0).empty());
}

TEST(UnitKG, LinearPlaneWave) {
  const kgl::TorusGrid g = kgl::make_grid(1, 2 * kPi, 32);
  const double k = 3.0, w = std::sqrt(1.0 + k * k);
  const auto w0 = SpectralField::from_function(g, [k](auto x) { return cplx(std::cos(k * x[0])); });
  const std::vector<double> t{0.5, 1.0};
  const auto traj = kgl::solve_unit_kg({w0, SpectralField(g), 0.0}, {EquationKind::unit_kg, 1.0, 0.0}, t,
                                       policy(1e-3));
  ASSERT_EQ(traj.size(), 2u);
  for (const auto& s : traj) EXPECT_LE(rel(s.position, std::cos(w * s.time) * w0), 1e-10);
  EXPECT_EQ(traj.back().position.frame(), kgl::Frame::rescaled);
}

TEST(UnitKG, ZeroDataStaysZero) {
  const kgl::TorusGrid g = kgl::make_grid(2, 8.0, 16);
  const std::vector<double> t{1.0};
  const auto traj = kgl::solve_unit_kg({SpectralField(g), SpectralField(g), 0.0},
                                       {EquationKind::unit_kg, 1.0, 1.0}, t, policy(0.05));
  EXPECT_EQ(kgl::l2_norm(traj.back().position), 0.0);
  EXPECT_EQ(kgl::l2_norm(traj.back().velocity), 0.0);
}

TEST(UnitKG, DuffingAgainstOracle) {
  const kgl::TorusGrid g = kgl::make_grid(1, 2 * kPi, 8);
  const SpectralField c = constant(g, 0.8);
  const EquationSpec spec{EquationKind::unit_kg, 1.0, 1.0};
  const std::vector<double> t{1.0, 2.0};
  const auto split = kgl::solve_unit_kg({c, SpectralField(g), 0.0}, spec, t, policy(1e-4));
  const auto oracle = kgl::rk4_oracle(spec, {c, SpectralField(g), 0.0}, t, 1e-4);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_LE(rel(split[i].position, oracle[i].position), 1e-8);
  }
}

TEST(UnitKG, StrangOrderAgainstOracle) {
  // Gaussian, λ = 1, 32 points, T = 1, h ∈ {1/16, …, 1/256}.
  const kgl::TorusGrid g = kgl::make_grid(1, 16.0, 32);
  const SpectralField w0 = kgl::gaussian(g, 1.0, 1.5);
  const SpectralField w1 = kgl::gaussian(g, 0.5, 1.5, {1.0});
  const EquationSpec spec{EquationKind::unit_kg, 1.0, 1.0};
  const std::vector<double> t{1.0};
  const auto ref = kgl::rk4_oracle(spec, {w0, w1, 0.0}, t, 1e-3);
  std::vector<std::pair<double, double>> pts;
  for (double h = 1.0 / 16; h >= 1.0 / 256; h /= 2) {
    const auto traj = kgl::solve_unit_kg({w0, w1, 0.0}, spec, t, policy(h));
    pts.emplace_back(h, kgl::l2_norm(traj.back().position - ref.back().position));
  }
  const kgl::RateFit fit = kgl::fit_rate(pts);
  EXPECT_NEAR(fit.slope, 2.0, 0.1) << "residual " << fit.residual;
}

TEST(UnitKG, ReversibleUnderPlusMinusStep) {
  const kgl::TorusGrid g = kgl::make_grid(1, 16.0, 64);
  const EquationSpec spec{EquationKind::unit_kg, 1.0, 3.0};
  kgl::SplitStepper stepper(g, spec);
  SecondOrderState s{kgl::gaussian(g, 1.0, 1.0).to_fourier(), kgl::gaussian(g, 0.7, 1.2, {0.5}).to_fourier(),
                     0.0};
  const SecondOrderState start = s;
  for (int i = 0; i < 20; ++i) stepper.step(s, 0.05);
  for (int i = 0; i < 20; ++i) stepper.step(s, -0.05);
  EXPECT_LE(rel(s.position, start.position), 1e-10);
  EXPECT_LE(rel(s.velocity, start.velocity), 1e-10);
}

TEST(UnitKG, LinearSubstepIsometry) {
  const kgl::TorusGrid g = kgl::make_grid(2, 10.0, 32);
  kgl::SplitStepper stepper(g, {EquationKind::unit_kg, 1.0, 1.0});
  SecondOrderState s{kgl::gaussian(g, 1.0, 1.0).to_fourier(), kgl::gaussian(g, 0.2, 0.8).to_fourier(),
                     0.0};
  const auto quad = [](const SecondOrderState& st) {
    const double a = kgl::l2_norm(st.position);
    const double b = kgl::l2_norm(kgl::apply_multiplier(st.velocity, kgl::MultiplierSpec::bracket_pow(-1.0)));
    return a * a + b * b;
  };
  const double q0 = quad(s);
  for (double h : {0.01, 0.3, 1.7}) {
    stepper.linear(s, h);
    EXPECT_NEAR(quad(s), q0, 1e-12 * q0);
  }
}

TEST(UnitKG, NonFiniteAborts) {
  const kgl::TorusGrid g = kgl::make_grid(1, 10.0, 16);
  SpectralField w0 = kgl::gaussian(g, 1.0, 1.0);
  w0.values()[3] = cplx(NAN, 0.0);
  const std::vector<double> t{0.1};
  EXPECT_THROW(kgl::solve_unit_kg({w0, SpectralField(g), 0.0}, {EquationKind::unit_kg, 1.0, 1.0}, t, policy(0.01)),
               kgl::NumericalError);
}

TEST(KGEps, LinearPlaneWave) {
  const kgl::TorusGrid g = kgl::make_grid(1, 2 * kPi, 32);
  const double eps = 0.25, k = 2.0;
  const double w = std::sqrt(1.0 + eps * eps * k * k) / (eps * eps);
  const auto u0 = SpectralField::from_function(g, [k](auto x) { return cplx(std::cos(k * x[0])); });
  const std::vector<double> t{1.0};
  const auto traj = kgl::solve_kg_eps(u0, SpectralField(g), {EquationKind::kg_eps, eps, 0.0}, t, policy(1e-3));
  EXPECT_LE(rel(traj.back().position, std::cos(w * 1.0) * u0), 1e-8);
}

TEST(KGEps, ConstantDataAgainstOracle) {
  const kgl::TorusGrid g = kgl::make_grid(1, 2 * kPi, 8);
  const double eps = 0.5;
  const SpectralField c = constant(g, 0.6);
  const EquationSpec spec{EquationKind::kg_eps, eps, 1.0};
  const std::vector<double> t{0.5};
  const auto split = kgl::solve_kg_eps(c, SpectralField(g), spec, t, policy(1e-4));
  const auto oracle = kgl::rk4_oracle(spec, {c, SpectralField(g), 0.0}, t, 1e-5);
  EXPECT_LE(rel(split.back().position, oracle.back().position), 1e-8);
}

TEST(KGEps, VelocityIsDividedByEpsSquared) {
  const kgl::TorusGrid g = kgl::make_grid(1, 2 * kPi, 8);
  const double eps = 0.5;
  const SpectralField u1 = constant(g, 0.3);
  const std::vector<double> t{0.0};
  const auto traj = kgl::solve_kg_eps(SpectralField(g), u1, {EquationKind::kg_eps, eps, 1.0}, t, policy(0.01));
  EXPECT_LE(rel(traj.front().velocity, (1.0 / (eps * eps)) * u1), 1e-14);
}

TEST(SchrodingerWave, SlowBranchConstant) {
  const kgl::TorusGrid g = kgl::make_grid(1, 2 * kPi, 8);
  const double eps = 0.5, lambda = 3.0, c = 0.5;
  const double w = (-1.0 + std::sqrt(1.0 + lambda * c * c * eps * eps)) / (eps * eps);
  // Substitution check of the dispersion relation ε²ω² + 2ω − λc² = 0.
  EXPECT_NEAR(eps * eps * w * w + 2 * w - lambda * c * c, 0.0, 1e-14);
  const std::vector<double> t{1.0};
  const auto traj = kgl::solve_schrodinger_wave(constant(g, c), constant(g, cplx(0.0, w * c)),
                                                {EquationKind::schrodinger_wave, eps, lambda}, t, policy(1e-3));
  EXPECT_LE(rel(traj.back().position, std::polar(1.0, w) * constant(g, c)), 1e-6);
}

TEST(SchrodingerWave, LinearModeOnSlowBranch) {
  const kgl::TorusGrid g = kgl::make_grid(1, 2 * kPi, 16);
  const double eps = 0.25, k = 3.0;
  const double wp = (-1.0 + std::sqrt(1.0 + eps * eps * k * k)) / (eps * eps);
  const auto v0 = SpectralField::from_function(g, [k](auto x) { return std::polar(1.0, k * x[0]); });
  const std::vector<double> t{0.7};
  // e^{i(kx+ωt)} solves the linear equation iff ε²ω² + 2ω − k² = 0.
  const auto traj = kgl::solve_schrodinger_wave(v0, cplx(0.0, wp) * v0,
                                                {EquationKind::schrodinger_wave, eps, 0.0}, t, policy(1e-3));
  EXPECT_LE(rel(traj.back().position, std::polar(1.0, wp * 0.7) * v0), 1e-10);
}

TEST(SchrodingerWave, RescaledFrameAgreesWithDirect) {
  const kgl::TorusGrid g = kgl::make_grid(1, 40.0, 256);
  const double eps = 0.125;
  const EquationSpec spec{EquationKind::schrodinger_wave, eps, 3.0};
  const SpectralField v0 = kgl::gaussian(g, 0.5, 1.0);
  const SpectralField v1 = kgl::gaussian(g, 0.2, 1.0, {1.0});
  const std::vector<double> t{0.5};
  StepPolicy direct = policy(0.02);
  StepPolicy frame = policy(0.02);
  frame.scheme = kgl::Scheme::rescaled_frame;
  const auto a = kgl::solve_schrodinger_wave(v0, v1, spec, t, direct);
  const auto b = kgl::solve_schrodinger_wave(v0, v1, spec, t, frame);
  EXPECT_LE(rel(b.back().position, a.back().position), 1e-3);
  EXPECT_EQ(b.back().position.grid(), g);
}

TEST(NLS, ConstantPhase) {
  const kgl::TorusGrid g = kgl::make_grid(1, 2 * kPi, 8);
  const double c = 0.8, lambda = 1.0;
  const std::vector<double> t{2.0};
  const auto traj = kgl::solve_nls(constant(g, c), {EquationKind::nls, 1.0, lambda}, t, policy(0.1));
  EXPECT_LE(rel(traj.back().position, std::polar(1.0, 0.5 * lambda * c * c * 2.0) * constant(g, c)), 1e-12);
}

TEST(NLS, PlaneWave) {
  const kgl::TorusGrid g = kgl::make_grid(1, 2 * kPi, 32);
  const double k = 2.0, a = 0.7, lambda = 3.0;
  const double w = 0.5 * (k * k + lambda * a * a);
  const auto v0 = SpectralField::from_function(g, [&](auto x) { return std::polar(a, k * x[0]); });
  const std::vector<double> t{1.0};
  const auto traj = kgl::solve_nls(v0, {EquationKind::nls, 1.0, lambda}, t, policy(0.01));
  EXPECT_LE(rel(traj.back().position, std::polar(1.0, w) * v0), 1e-8);
}

TEST(NLS, MassConservedToRoundoff) {
  const kgl::TorusGrid g = kgl::make_grid(1, 30.0, 256);
  const SpectralField v0 = kgl::gaussian(g, 1.0, 1.0) + cplx(0.0, 0.3) * kgl::gaussian(g, 1.0, 2.0, {2.0});
  const std::vector<double> t{10.0};
  const auto traj = kgl::solve_nls(v0, {EquationKind::nls, 1.0, 3.0}, t, policy(0.01));
  EXPECT_NEAR(kgl::l2_norm(traj.back().position), kgl::l2_norm(v0), 1e-12 * kgl::l2_norm(v0));
}

TEST(Oracle, LinearModeClosedForm) {
  const kgl::TorusGrid g = kgl::make_grid(1, 2 * kPi, 16);
  const double k = 2.0, w = std::sqrt(1.0 + k * k);
  const auto w0 = SpectralField::from_function(g, [k](auto x) { return cplx(std::cos(k * x[0])); });
  const std::vector<double> t{1.0};
  const auto traj = kgl::rk4_oracle({EquationKind::unit_kg, 1.0, 0.0}, {w0, SpectralField(g), 0.0}, t, 1e-4);
  EXPECT_LE(rel(traj.back().position, std::cos(w) * w0), 1e-10);
}

TEST(Oracle, RejectsLargeStepsAndGrids) {
  const kgl::TorusGrid small = kgl::make_grid(1, 2 * kPi, 16);
  const kgl::TorusGrid big = kgl::make_grid(1, 2 * kPi, 64);
  const std::vector<double> t{1.0};
  const EquationSpec spec{EquationKind::unit_kg, 1.0, 0.0};
  EXPECT_THROW(kgl::rk4_oracle(spec, {SpectralField(small), SpectralField(small), 0.0}, t, 0.5),
               std::invalid_argument);
  EXPECT_THROW(kgl::rk4_oracle(spec, {SpectralField(big), SpectralField(big), 0.0}, t, 1e-4),
               std::invalid_argument);
}

TEST(Oracle, NLSConstantPhase) {
  const kgl::TorusGrid g = kgl::make_grid(1, 2 * kPi, 8);
  const double c = 0.8;
  const std::vector<double> t{1.0};
  const auto traj = kgl::rk4_oracle({EquationKind::nls, 1.0, 1.0}, {constant(g, c), SpectralField(g), 0.0}, t, 1e-3);
  EXPECT_LE(rel(traj.back().position, std::polar(1.0, 0.5 * c * c) * constant(g, c)), 1e-10);
}

TEST(Conserved, ConstantDataEnergyAndMass) {
  const kgl::TorusGrid g = kgl::make_grid(1, 6.0, 16);
  const double c = 0.7, V = 6.0;
  const auto kg = kgl::conserved_quantities({constant(g, c), SpectralField(g), 0.0}, {EquationKind::unit_kg, 1.0, 1.0});
  ASSERT_TRUE(kg.kg_energy);
  EXPECT_NEAR(*kg.kg_energy, V * (c * c + 0.5 * c * c * c * c), 1e-12);
  const auto sw = kgl::conserved_quantities({constant(g, c), SpectralField(g), 0.0},
                                            {EquationKind::schrodinger_wave, 0.5, 1.0});
  ASSERT_TRUE(sw.sw_mass);
  EXPECT_NEAR(*sw.sw_mass, V * c * c, 1e-12);
}

TEST(Conserved, DriftDefinition) {
  EXPECT_DOUBLE_EQ(kgl::relative_drift(2.0, 2.5), 0.25);
  EXPECT_DOUBLE_EQ(kgl::relative_drift(0.0, 1e-31), 1e-31 / 1e-30);
}

TEST(Conserved, UnitKGEnergyDriftSmallStep) {
  const kgl::TorusGrid g = kgl::make_grid(1, 30.0, 128);
  const SpectralField w0 = kgl::gaussian(g, 0.3, 1.0);
  const SpectralField w1 = cplx(0.0, 1.0) * w0;
  const EquationSpec spec{EquationKind::unit_kg, 1.0, 3.0};
  std::vector<double> t;
  for (int i = 1; i <= 10; ++i) t.push_back(i);
  const auto traj = kgl::solve_unit_kg({w0, w1, 0.0}, spec, t, policy(1e-2));
  EXPECT_LT(kgl::trajectory_drift(traj, spec).energy, 1e-6);
}

TEST(NLS, TimeDerivativeMatchesFiniteDifference) {
  const kgl::TorusGrid g = kgl::make_grid(1, 30.0, 256);
  const SpectralField v0 = kgl::gaussian(g, 0.8, 1.0) + cplx(0.0, 0.5) * kgl::gaussian(g, 1.0, 1.5, {1.0});
  const EquationSpec spec{EquationKind::nls, 1.0, 3.0};
  const SpectralField exact = kgl::nls_time_derivative(v0, 3.0);
  double prev = 0.0;
  for (double dt : {1e-2, 5e-3}) {
    const std::vector<double> tp{dt};
    const auto fwd = kgl::solve_nls(v0, spec, tp, policy(dt / 8));
    // Time-reversed run: v(−dt) equals conj of the forward solution from conj(v0).
    const auto bwd = kgl::solve_nls(v0.conj(), spec, tp, policy(dt / 8));
    const SpectralField fd = cplx(0.5 / dt) * (fwd.back().position - bwd.back().position.conj());
    const double err = rel(fd, exact);
    if (prev > 0.0) {
      EXPECT_NEAR(prev / err, 4.0, 0.6);
    }
    prev = err;
  }
}

}  // namespace
