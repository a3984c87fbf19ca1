#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kgl/dynamics.hpp"
#include "kgl/error.hpp"
#include "kgl/fft.hpp"
#include "kgl/kernels.hpp"

namespace kgl {

namespace {

constexpr int kOracleMaxPoints = 32;
constexpr double kOracleStability = 0.1;

struct Rhs {
  const TorusGrid& grid;
  EquationSpec spec;
  std::vector<double> mask;
  std::vector<double> xi2;
  std::vector<cplx> scratch;

  // F(|x|²x) in Fourier, filtered.
  void cubic_hat(std::span<const cplx> a) {
    std::copy(a.begin(), a.end(), scratch.begin());
    fft::inverse(grid, scratch);
    kernels::cubic(scratch, scratch, 1.0);
    fft::forward(grid, scratch);
    if (!mask.empty()) kernels::scale_by_symbol(scratch, mask);
  }

  void operator()(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> da,
                  std::span<cplx> db) {
    const double lam = spec.lambda;
    const double e2 = spec.epsilon * spec.epsilon;
    if (lam != 0.0) {
      cubic_hat(a);
    } else {
      std::fill(scratch.begin(), scratch.end(), cplx(0.0));
    }
    const cplx I(0.0, 1.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const cplx nl = lam * scratch[i];
      switch (spec.kind) {
        case EquationKind::unit_kg:
          da[i] = b[i];
          db[i] = -(1.0 + xi2[i]) * a[i] - nl;
          break;
        case EquationKind::kg_eps:
          da[i] = b[i];
          db[i] = -((1.0 + e2 * xi2[i]) * a[i] / e2 + nl) / e2;
          break;
        case EquationKind::schrodinger_wave:
          da[i] = b[i];
          db[i] = (-2.0 * I * b[i] - xi2[i] * a[i] - nl) / e2;
          break;
        case EquationKind::nls:
          da[i] = 0.5 * I * (xi2[i] * a[i] + nl);
          db[i] = 0.0;
          break;
      }
    }
  }
};

double max_frequency(const TorusGrid& grid, const EquationSpec& spec) {
  double xi2 = 0.0;
  for (int a = 0; a < grid.dim(); ++a) xi2 += std::pow(grid.max_wavenumber(a), 2);
  const double e2 = spec.epsilon * spec.epsilon;
  switch (spec.kind) {
    case EquationKind::unit_kg:
      return std::sqrt(1.0 + xi2);
    case EquationKind::kg_eps:
      return std::sqrt(1.0 + e2 * xi2) / e2;
    case EquationKind::schrodinger_wave:
      return (1.0 + std::sqrt(1.0 + e2 * xi2)) / e2;
    case EquationKind::nls:
      return 0.5 * xi2;
  }
  return 0.0;
}

}  // namespace

Trajectory rk4_oracle(const EquationSpec& spec, const SecondOrderState& initial,
                      std::span<const double> output_times, double h, Dealias dealias) {
  spec.validate();
  const TorusGrid& grid = initial.position.grid();
  for (int a = 0; a < grid.dim(); ++a) {
    if (grid.points(a) > kOracleMaxPoints) {
      throw std::invalid_argument("rk4 oracle is limited to 32 points per axis");
    }
  }
  if (!(h > 0.0) || h * max_frequency(grid, spec) > kOracleStability) {
    throw std::invalid_argument("rk4 oracle step violates h * max|omega| <= 0.1");
  }

  const auto xi2 = grid.xi_squared();
  Rhs rhs{grid, spec, dealias_mask(grid, dealias, spec.lambda), {xi2.begin(), xi2.end()},
          std::vector<cplx>(grid.size())};

  const std::size_t n = grid.size();
  SpectralField a = initial.position.to_fourier();
  SpectralField b = spec.kind == EquationKind::nls ? SpectralField(grid, Representation::fourier)
                                                   : initial.velocity.to_fourier();
  std::vector<cplx> k1a(n), k1b(n), k2a(n), k2b(n), k3a(n), k3b(n), k4a(n), k4b(n), ta(n), tb(n);
  auto stage = [&](std::span<const cplx> ka, std::span<const cplx> kb, double c) {
    for (std::size_t i = 0; i < n; ++i) {
      ta[i] = a.values()[i] + c * ka[i];
      tb[i] = b.values()[i] + c * kb[i];
    }
  };

  double t = initial.time;
  Trajectory out;
  for (double target : output_times) {
    if (target < t - 1e-12) throw std::invalid_argument("output times must be nondecreasing");
    const double span = target - t;
    const auto steps = static_cast<long long>(std::ceil(span / h - 1e-9));
    const double dt = steps > 0 ? span / static_cast<double>(steps) : 0.0;
    for (long long s = 0; s < steps; ++s) {
      rhs(a.values(), b.values(), k1a, k1b);
      stage(k1a, k1b, 0.5 * dt);
      rhs(ta, tb, k2a, k2b);
      stage(k2a, k2b, 0.5 * dt);
      rhs(ta, tb, k3a, k3b);
      stage(k3a, k3b, dt);
      rhs(ta, tb, k4a, k4b);
      for (std::size_t i = 0; i < n; ++i) {
        a.values()[i] += dt / 6.0 * (k1a[i] + 2.0 * k2a[i] + 2.0 * k3a[i] + k4a[i]);
        b.values()[i] += dt / 6.0 * (k1b[i] + 2.0 * k2b[i] + 2.0 * k3b[i] + k4b[i]);
      }
    }
    t = target;
    SecondOrderState st{a.to_physical(), b.to_physical(), t};
    if (!kernels::all_finite(st.position.values())) {
      throw NumericalError("rk4 oracle diverged at t=" + std::to_string(t));
    }
    if (spec.kind == EquationKind::nls) st.velocity = nls_time_derivative(st.position, spec.lambda);
    out.push_back(std::move(st));
  }
  return out;
}

}  // namespace kgl
