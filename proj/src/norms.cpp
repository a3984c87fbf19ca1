#include "kgl/norms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "kgl/error.hpp"
#include "kgl/kernels.hpp"

namespace kgl {

namespace {

void require_finite(const SpectralField& f) {
  if (!kernels::all_finite(f.values())) throw NumericalError("norm of a field with NaN/Inf samples");
}

}  // namespace

double l2_norm(const SpectralField& f) {
  require_finite(f);
  if (f.representation() == Representation::physical) {
    return std::sqrt(f.grid().cell_volume() * kernels::weighted_sum_sq(f.values(), {}));
  }
  return std::sqrt(f.grid().cell_volume() / static_cast<double>(f.size()) *
                   kernels::weighted_sum_sq(f.values(), {}));
}

double lp_norm(const SpectralField& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("L^p norm needs p >= 1");
  const SpectralField g = f.to_physical();
  require_finite(g);
  if (std::isinf(p)) return kernels::max_abs(g.values());
  if (p == 2.0) return l2_norm(g);
  return std::pow(g.grid().cell_volume() * kernels::sum_abs_pow(g.values(), p), 1.0 / p);
}

double sobolev_norm(const SpectralField& f, double gamma, bool homogeneous) {
  if (gamma < -2.0 || gamma > 6.0) throw std::invalid_argument("Sobolev index outside [-2, 6]");
  if (gamma == 0.0) return l2_norm(f);
  const SpectralField g = f.to_fourier();
  require_finite(g);
  const auto xi2 = g.grid().xi_squared();
  std::vector<double> w(xi2.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (homogeneous) {
      w[i] = xi2[i] == 0.0 ? 0.0 : std::pow(xi2[i], gamma);
    } else {
      w[i] = std::pow(1.0 + xi2[i], gamma);
    }
  }
  return std::sqrt(g.grid().cell_volume() / static_cast<double>(g.size()) *
                   kernels::weighted_sum_sq(g.values(), w));
}

cplx inner_product(const SpectralField& f, const SpectralField& g) {
  f.require_same_grid(g);
  const SpectralField a = f.to_physical();
  const SpectralField b = g.to_physical();
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.values()[i] * std::conj(b.values()[i]);
  return s * f.grid().cell_volume();
}

NormReport norms(const SpectralField& f, const NormRequest& request) {
  NormReport r;
  r.l2 = l2_norm(f);
  for (double p : request.lp) r.lp[p] = lp_norm(f, p);
  for (double g : request.sobolev) {
    r.hdot[g] = g == 0.0 ? r.l2 : sobolev_norm(f, g, true);
    r.h[g] = g == 0.0 ? r.l2 : sobolev_norm(f, g, false);
  }
  return r;
}

SpacetimeAccumulator SpacetimeAccumulator::strichartz_diagonal(int dim) {
  const double q = 2.0 * (dim + 2) / dim;
  return {q, q};
}

void SpacetimeAccumulator::add_slice(const SpectralField& f, double width) {
  const double n = lp_norm(f, r_);
  if (std::isinf(q_)) {
    max_ = std::max(max_, n);
  } else {
    sum_ += width * std::pow(n, q_);
  }
}

double SpacetimeAccumulator::value() const {
  return std::isinf(q_) ? max_ : std::pow(sum_, 1.0 / q_);
}

}  // namespace kgl
