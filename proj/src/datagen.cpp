#include "kgl/datagen.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kgl/kernels.hpp"
#include "kgl/limits.hpp"
#include "kgl/multiplier.hpp"
#include "kgl/norms.hpp"

namespace kgl {

namespace {

double smootherstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

double radius(std::span<const double> x) {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  return std::sqrt(r2);
}

}  // namespace

std::vector<std::string> DataSpec::check() const {
  std::vector<std::string> warnings;
  if (family == DataFamily::chirped_annulus) {
    if (!(delta0 < a0)) warnings.push_back("chirped annulus: expected delta0 << a0");
    if (!(a0 * b0 < 1.0)) warnings.push_back("chirped annulus: expected a0 << 1/b0");
    if (mollify == 0.0) warnings.push_back("chirped annulus: sharp cutoff (mollify = 0) rings near the edges");
  }
  return warnings;
}

SpectralField gaussian(const TorusGrid& grid, double amplitude, double width,
                       const std::vector<double>& center) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian width must be positive");
  if (!center.empty() && static_cast<int>(center.size()) != grid.dim()) {
    throw std::invalid_argument("gaussian center must have one entry per axis");
  }
  return SpectralField::from_function(grid, [&](std::span<const double> x) {
    double r2 = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) {
      const double dx = x[a] - (center.empty() ? 0.0 : center[a]);
      r2 += dx * dx;
    }
    return cplx(amplitude * std::exp(-0.5 * r2 / (width * width)));
  });
}

SpectralField annulus_profile(const TorusGrid& grid, double a0, double mollify) {
  if (!(a0 > 0.0)) throw std::invalid_argument("annulus radius a0 must be positive");
  if (mollify < 0.0 || mollify >= 1.0) throw std::invalid_argument("mollify must lie in [0, 1)");
  for (int a = 0; a < grid.dim(); ++a) {
    if (!(2.0 * a0 * (1.0 + 0.5 * mollify) < 0.5 * grid.extent(a))) {
      throw std::invalid_argument("annulus outer radius 2*a0 does not fit in the box");
    }
  }
  const double w = mollify * a0;
  return SpectralField::from_function(grid, [&](std::span<const double> x) {
    const double r = radius(x);
    double chi;
    if (w == 0.0) {
      chi = (r >= a0 && r <= 2.0 * a0) ? 1.0 : 0.0;
    } else {
      chi = smootherstep((r - a0) / w + 0.5) * smootherstep((2.0 * a0 - r) / w + 0.5);
    }
    return cplx(chi == 0.0 ? 0.0 : chi / r);
  });
}

SpectralField chirped_annulus(const TorusGrid& grid, double delta0, double a0, double b0,
                              double mollify) {
  SpectralField f = annulus_profile(grid, a0, mollify);
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const auto idx = grid.unflatten(flat);
    double r2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) r2 += std::pow(grid.position(a, idx[a]), 2);
    f.values()[flat] *= delta0 * std::polar(1.0, -0.5 * b0 * r2);
  }
  f.set_frame(Frame::modulated);
  return f;
}

double defect_functional(const SpectralField& v0, const SpectralField& v1) {
  v0.require_same_grid(v1);
  const SpectralField a = v0.to_physical();
  const SpectralField b = v1.to_physical();
  SpectralField d(a.grid());
  const cplx I(0.0, 1.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const cplx z = a.values()[i];
    const cplx z3 = z * z * z;
    d.values()[i] = -2.0 * b.values()[i].real() + 0.5 * I * z3 - 0.25 * I * std::conj(z3);
  }
  return l2_norm(d);
}

SpectralField from_fourier_transform(const TorusGrid& grid,
                                     const std::function<cplx(std::span<const double>)>& fn) {
  SpectralField f(grid, Representation::fourier, Frame::modulated);
  const double cell = grid.cell_volume();
  std::array<double, TorusGrid::kMaxDim> xi{};
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const auto idx = grid.unflatten(flat);
    int parity = 0;
    for (int a = 0; a < grid.dim(); ++a) {
      xi[a] = grid.wavenumber(a, idx[a]);
      parity += grid.mode_index(a, idx[a]);
    }
    // e^{−iξ·L/2} on the lattice is (−1)^{Σm}
    const double sign = (parity % 2 == 0) ? 1.0 : -1.0;
    f.values()[flat] = sign * fn(std::span<const double>(xi.data(), grid.dim())) / cell;
  }
  f.make_physical();
  return f;
}

SpectralField rough_sobolev(const TorusGrid& grid, double delta0, double alpha) {
  if (alpha < 1.0 || alpha > 4.0) throw std::invalid_argument("rough profile alpha must lie in [1, 4]");
  const double d = grid.dim();
  return from_fourier_transform(grid, [&](std::span<const double> xi) {
    const double b2 = std::sqrt(radius(xi) * radius(xi) + 2.0);
    return cplx(delta0 * std::pow(b2, -alpha - 0.5 * d) / std::log(b2));
  });
}

SpectralField lens_transform_exact(const SpectralField& f, const LensParams& params) {
  const double s = 1.0 + params.b * params.t;
  if (!(s > 0.0)) throw std::invalid_argument("lens transform needs 1 + b t > 0");
  const TorusGrid& grid = f.grid();

  SpectralField g = f.to_fourier();
  const auto xi2 = grid.xi_squared();
  const double tb = params.t_b();
  for (std::size_t i = 0; i < g.size(); ++i) g.values()[i] *= std::polar(1.0, 0.5 * xi2[i] * tb);
  g.make_physical();

  SpectralField out = dilate(g, s, grid);
  const double amp = std::pow(s, -0.5 * grid.dim());
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const auto idx = grid.unflatten(flat);
    double r2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) r2 += std::pow(grid.position(a, idx[a]), 2);
    out.values()[flat] *= amp * std::polar(1.0, -0.5 * params.b * r2 / s);
  }
  out.set_frame(f.frame());
  return out;
}

double lowpass_cutoff(double epsilon, double horizon) {
  const double e2t = epsilon * epsilon * horizon;
  if (!(e2t > 0.0 && e2t <= 1.0)) throw std::invalid_argument("low-pass split needs 0 < eps^2 T <= 1");
  return std::pow(e2t, -0.25);
}

SpectralField lowpass_data(const SpectralField& v0, double epsilon, double horizon) {
  const double n = lowpass_cutoff(epsilon, horizon);
  for (int a = 0; a < v0.grid().dim(); ++a) {
    if (n < 2.0 * std::numbers::pi / v0.grid().extent(a)) {
      throw std::invalid_argument("low-pass cutoff is below the lattice frequency spacing");
    }
  }
  return project_low(v0, n);
}

SpectralField preset_v1(const SpectralField& v0, double lambda) {
  const SpectralField p = v0.to_physical();
  SpectralField cube(p.grid());
  kernels::cubic(p.values(), cube.values(), lambda);
  SpectralField out = cplx(0.0, 0.5) * (cube - laplacian(p));
  out.set_frame(v0.frame());
  return out;
}

std::string to_string(DataFamily family) {
  switch (family) {
    case DataFamily::gaussian:
      return "gaussian";
    case DataFamily::chirped_annulus:
      return "chirped-annulus";
    case DataFamily::rough_sobolev:
      return "rough-sobolev";
    case DataFamily::lowpass_of:
      return "lowpass-of";
    case DataFamily::preset_v1:
      return "preset-v1";
  }
  return "?";
}

}  // namespace kgl
