// Scaling, WKB reconstruction, remainders and the wave decomposition.

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "kgl/datagen.hpp"
#include "kgl/limits.hpp"
#include "kgl/multiplier.hpp"
#include "kgl/norms.hpp"

namespace {

using kgl::cplx;
using kgl::EquationKind;
using kgl::ScaleDirection;
using kgl::ScalingOp;
using kgl::SecondOrderState;
using kgl::SpectralField;

constexpr double kPi = std::numbers::pi;

double rel(const SpectralField& a, const SpectralField& b) {
  return kgl::l2_norm(a - b) / std::max(kgl::l2_norm(b), 1e-300);
}

kgl::StepPolicy policy(double h0) {
  kgl::StepPolicy p;
  p.base_step = h0;
  return p;
}

TEST(Scaling, EpsilonOneIsIdentity) {
  const kgl::TorusGrid g = kgl::make_grid(1, 20.0, 128);
  const SpectralField f = kgl::gaussian(g, 1.0, 1.3, {0.4});
  EXPECT_LE(kgl::max_abs_difference(kgl::scale_field(f, {1.0, ScaleDirection::forward}), f), 1e-15);
}

TEST(Scaling, NormLawInOneAndTwoDimensions) {
  const kgl::TorusGrid g1 = kgl::make_grid(1, 20.0, 256);
  const SpectralField f1 = kgl::gaussian(g1, 1.0, 1.0);
  const SpectralField s1 = kgl::scale_field(f1, {0.25, ScaleDirection::forward});
  EXPECT_NEAR(kgl::l2_norm(s1), 0.5 * kgl::l2_norm(f1), 1e-10);
  EXPECT_EQ(s1.grid().extent(0), 80.0);

  const kgl::TorusGrid g2 = kgl::make_grid(2, 16.0, 64);
  const SpectralField f2 = kgl::gaussian(g2, 1.0, 1.0, {0.5, -0.3});
  const SpectralField s2 = kgl::scale_field(f2, {0.125, ScaleDirection::forward});
  EXPECT_NEAR(kgl::l2_norm(s2), kgl::l2_norm(f2), 1e-8 * kgl::l2_norm(f2));
}

TEST(Scaling, ForwardInverseRoundTrip) {
  const kgl::TorusGrid g = kgl::make_grid(1, 30.0, 256);
  const SpectralField f = kgl::gaussian(g, 1.0, 1.0, {1.0}) + cplx(0.0, 0.5) * kgl::gaussian(g, 1.0, 2.0);
  const ScalingOp fwd{0.25, ScaleDirection::forward};
  const SpectralField up = kgl::scale_field(f, fwd);
  const SpectralField back = kgl::scale_field(up, {0.25, ScaleDirection::inverse}, g);
  EXPECT_LE(rel(back, f), 1e-10);
}

TEST(Scaling, OffLatticeResampleAndMassGuard) {
  const kgl::TorusGrid g = kgl::make_grid(1, 30.0, 256);
  const SpectralField f = kgl::gaussian(g, 1.0, 1.0);
  // Target box not matched to the source lattice: general interpolation path.
  const kgl::TorusGrid target = kgl::make_grid(1, 50.0, 512);
  const SpectralField s = kgl::scale_field(f, {0.5, ScaleDirection::forward}, target);
  const auto exact = SpectralField::from_function(target, [](auto y) {
    const double x = 0.5 * y[0];
    return cplx(0.5 * std::exp(-0.5 * x * x));
  });
  EXPECT_LE(kgl::max_abs_difference(s, exact), 1e-10);

  // A box that only covers |εy| < 2.5 loses most of a width-4 Gaussian.
  const SpectralField wide = kgl::gaussian(g, 1.0, 4.0);
  EXPECT_THROW(kgl::scale_field(wide, {0.5, ScaleDirection::forward}, kgl::make_grid(1, 10.0, 128)),
               std::invalid_argument);
}

TEST(CompatibleData, Relations) {
  const kgl::TorusGrid g = kgl::make_grid(1, 20.0, 64);
  const SpectralField u0 = kgl::gaussian(g, 1.0, 1.0);
  const SpectralField u1 = kgl::gaussian(g, 0.4, 1.5, {1.0});
  const SpectralField zero(g);
  EXPECT_LE(rel(kgl::compatible_v0(u0, zero), cplx(0.5) * u0), 1e-15);
  EXPECT_LE(rel(kgl::compatible_v0(zero, u1), cplx(0.0, -0.5) * u1), 1e-15);
  const SpectralField v0 = kgl::compatible_v0(u0, u1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(2 * v0.values()[i].real(), u0.values()[i].real(), 1e-15);
    EXPECT_NEAR(-2 * v0.values()[i].imag(), u1.values()[i].real(), 1e-15);
  }
  EXPECT_THROW(kgl::compatible_v0(u0, SpectralField(kgl::make_grid(1, 21.0, 64))), std::invalid_argument);
}

TEST(Wkb, ReconstructionIdentities) {
  const kgl::TorusGrid g = kgl::make_grid(1, 20.0, 64);
  const SpectralField v = kgl::gaussian(g, 1.0, 1.0) + cplx(0.0, 0.3) * kgl::gaussian(g, 1.0, 2.0, {1.0});
  const double eps = 0.25;
  const SpectralField at0 = kgl::wkb_reconstruct(v, 0.0, eps);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(at0.values()[i].real(), 2 * v.values()[i].real(), 1e-15);

  const SpectralField real_v = kgl::gaussian(g, 1.0, 1.0);
  EXPECT_LE(kgl::l2_norm(kgl::wkb_reconstruct(real_v, 0.5 * kPi * eps * eps, eps)), 1e-15);

  for (double t : {0.1, 0.77, 3.0}) {
    const SpectralField r = kgl::wkb_reconstruct(v, t, eps);
    double imag = 0.0;
    for (const auto& z : r.values()) imag += z.imag() * z.imag();
    EXPECT_LE(std::sqrt(imag * g.cell_volume()), 1e-12 * kgl::l2_norm(r));
  }
}

TEST(Remainder, IdenticalAndPreparedData) {
  const kgl::TorusGrid g = kgl::make_grid(1, 20.0, 64);
  const SpectralField v0 = kgl::gaussian(g, 1.0, 1.0) + cplx(0.0, 0.4) * kgl::gaussian(g, 1.0, 1.0, {1.0});
  const SecondOrderState s{v0, SpectralField(g), 0.5};
  EXPECT_EQ(kgl::remainder(s, s, 0.25, kgl::Pairing::sw_vs_nls).l2_error, 0.0);

  // u₀ = 2Re v₀ is the prepared relation, so the kg-vs-sw remainder vanishes at t = 0.
  SpectralField u0(g);
  for (std::size_t i = 0; i < g.size(); ++i) u0.values()[i] = 2 * v0.values()[i].real();
  const auto r = kgl::remainder(SecondOrderState{u0, SpectralField(g), 0.0},
                                SecondOrderState{v0, SpectralField(g), 0.0}, 0.25, kgl::Pairing::kg_vs_sw, {1.0});
  EXPECT_EQ(r.l2_error, 0.0);
  EXPECT_EQ(r.sobolev_error.at(1.0), 0.0);
}

TEST(Remainder, MissingTimeRejected) {
  const kgl::TorusGrid g = kgl::make_grid(1, 20.0, 32);
  const kgl::Trajectory a{{SpectralField(g), SpectralField(g), 0.0}, {SpectralField(g), SpectralField(g), 1.0}};
  const kgl::Trajectory b{{SpectralField(g), SpectralField(g), 0.0}, {SpectralField(g), SpectralField(g), 1.5}};
  EXPECT_THROW(kgl::remainder(a, b, 0.5, kgl::Pairing::sw_vs_nls), std::invalid_argument);
}

TEST(Remainder, ScaleInvariantInTwoDimensions) {
  const kgl::TorusGrid g = kgl::make_grid(2, 16.0, 64);
  const SpectralField a = kgl::gaussian(g, 1.0, 1.0);
  const SpectralField b = kgl::gaussian(g, 0.9, 1.1, {0.2, 0.0});
  const double before = kgl::remainder(SecondOrderState{a, a, 0.0}, SecondOrderState{b, b, 0.0}, 0.25,
                                       kgl::Pairing::sw_vs_nls).l2_error;
  const ScalingOp op{0.25, ScaleDirection::forward};
  const SpectralField sa = kgl::scale_field(a, op), sb = kgl::scale_field(b, op);
  const double after = kgl::remainder(SecondOrderState{sa, sa, 0.0}, SecondOrderState{sb, sb, 0.0}, 0.25,
                                      kgl::Pairing::sw_vs_nls).l2_error;
  EXPECT_NEAR(after, before, 1e-8 * before);
}

TEST(Waves, ConstantStateAndRoundTrip) {
  const kgl::TorusGrid g = kgl::make_grid(1, 10.0, 32);
  const cplx c(0.6, 0.2);
  const auto w = SpectralField::from_function(g, [c](auto) { return c; });
  const auto waves = kgl::wave_decompose({w, cplx(0.0, 1.0) * w, 0.0});
  EXPECT_LE(kgl::l2_norm(waves.leftward), 1e-14);
  EXPECT_LE(rel(waves.rightward, cplx(0.0, 2.0) * w), 1e-14);

  const SpectralField p = kgl::gaussian(g, 1.0, 1.0, {0.3});
  const SpectralField q = cplx(0.2, -0.7) * kgl::gaussian(g, 1.0, 1.4);
  const auto back = kgl::wave_reconstruct(kgl::wave_decompose({p, q, 0.0}));
  EXPECT_LE(rel(back.position, p), 1e-12);
  EXPECT_LE(rel(back.velocity, q), 1e-12);
}

TEST(Waves, LinearFlowKeepsLeftwardNorm) {
  const kgl::TorusGrid g = kgl::make_grid(1, 40.0, 128);
  const double eps = 0.25;
  const SpectralField v0 = kgl::gaussian(g, 1.0, 1.0);
  const SecondOrderState init = kgl::rescaled_initial_state(v0, kgl::gaussian(g, 0.3, 1.0), eps);
  std::vector<double> t{0.5, 1.0, 2.0, 4.0};
  const auto traj = kgl::solve_unit_kg(init, {EquationKind::unit_kg, 1.0, 0.0}, t, policy(0.05));
  const double w10 = kgl::l2_norm(kgl::wave_decompose(init).leftward);
  const auto track = kgl::leftward_smallness_track(traj, eps);
  for (const auto& s : track.samples) EXPECT_NEAR(s.w1_l2, w10, 1e-11 * w10);
}

TEST(Waves, LeftwardInitialSizeQuartersWithEpsilon) {
  const kgl::TorusGrid g = kgl::make_grid(2, 16.0, 64);
  const SpectralField v0 = kgl::gaussian(g, 1.0, 1.0);
  const SpectralField v1 = kgl::gaussian(g, 0.5, 1.0, {0.5, 0.0});
  double prev = 0.0;
  for (double eps : {0.25, 0.125}) {
    const double w1 = kgl::l2_norm(kgl::wave_decompose(kgl::rescaled_initial_state(v0, v1, eps)).leftward);
    if (prev > 0.0) {
      EXPECT_NEAR(prev / w1, 4.0, 0.6);
    }
    prev = w1;
  }
}

TEST(FrameIdentity, SchrodingerWaveMapsToUnitKG) {
  // v solves the SW equation; w = e^{is}𝒮_ε v with s = t/ε² solves unit KG.
  const kgl::TorusGrid g = kgl::make_grid(1, 20.0, 128);
  const double eps = 0.5, lambda = 3.0;
  const SpectralField v0 = kgl::gaussian(g, 0.5, 1.0);
  const SpectralField v1 = kgl::gaussian(g, 0.2, 1.0, {0.5});
  const double ds = 0.01;
  const double e2 = eps * eps;
  const std::vector<double> t{1.0 * e2 - ds * e2, 1.0 * e2, 1.0 * e2 + ds * e2};
  const auto traj = kgl::solve_schrodinger_wave(v0, v1, {EquationKind::schrodinger_wave, eps, lambda}, t,
                                                policy(1e-4));
  std::vector<SecondOrderState> w;
  for (const auto& s : traj) {
    SpectralField sv = kgl::scale_field(s.position, {eps, ScaleDirection::forward});
    w.push_back({std::polar(1.0, s.time / e2) * sv, SpectralField(sv.grid()), s.time / e2});
  }
  const double res = kgl::unit_kg_residual(w[0], w[1], w[2], lambda);
  const double size = kgl::l2_norm(w[1].position);
  // Centered second difference: O(ds²) truncation relative to ‖w‖.
  EXPECT_LT(res / size, 1e-3);
}

TEST(NlsVelocity, RealAndImaginaryData) {
  const kgl::TorusGrid g = kgl::make_grid(1, 20.0, 128);
  const SpectralField real_v = kgl::gaussian(g, 1.0, 1.0);
  EXPECT_LE(kgl::l2_norm(kgl::nls_remainder_initial_velocity(real_v, 3.0)), 1e-13);
  const SpectralField ig = cplx(0.0, 1.0) * real_v;
  const SpectralField out = kgl::nls_remainder_initial_velocity(ig, 0.0);
  EXPECT_LE(rel(out, cplx(-1.0) * kgl::laplacian(real_v)), 1e-12);
}

TEST(BoundaryTerm, ZeroAndSingleMode) {
  const kgl::TorusGrid g = kgl::make_grid(1, 2 * kPi * 8, 128);  // ξ spacing 1/8
  EXPECT_EQ(kgl::l2_norm(kgl::resonance_boundary_term(SpectralField(g)).total()), 0.0);

  const double k = 1.0 / 8;  // 3k = 3/8 < 1/2 so χ(3k) = 1
  const auto h = SpectralField::from_function(g, [k](auto x) { return std::polar(1.0, k * x[0]); });
  const kgl::BoundaryTerm b = kgl::resonance_boundary_term(h);
  const double br = std::sqrt(1.0 + 9 * k * k);
  const double coeff = 1.0 / ((br - 3.0) * br);
  const auto mode3 = SpectralField::from_function(g, [k](auto x) { return std::polar(1.0, 3 * k * x[0]); });
  EXPECT_LE(rel(b.resonant, cplx(coeff) * mode3), 1e-12);
  EXPECT_LE(rel(b.companion, cplx(1.0 / ((br + 3.0) * br)) * mode3.conj()), 1e-12);
}

TEST(BoundaryTerm, ScalesLikeEpsilonSquaredInTwoDimensions) {
  const kgl::TorusGrid g = kgl::make_grid(2, 12.0, 64);
  const SpectralField v = kgl::gaussian(g, 1.0, 1.0);
  std::vector<std::pair<double, double>> pts;
  for (double eps : {0.5, 0.25, 0.125}) {
    const SpectralField h = kgl::scale_field(v, {eps, ScaleDirection::forward});
    pts.emplace_back(eps, kgl::l2_norm(kgl::resonance_boundary_term(h).total()));
  }
  const double slope = std::log(pts[0].second / pts[2].second) / std::log(pts[0].first / pts[2].first);
  EXPECT_NEAR(slope, 2.0, 0.3);
}

}  // namespace
