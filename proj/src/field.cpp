#include "kgl/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kgl/fft.hpp"
#include "kgl/kernels.hpp"

namespace kgl {

SpectralField::SpectralField(TorusGrid grid, Representation rep, Frame frame)
    : grid_(std::move(grid)), values_(grid_.size()), rep_(rep), frame_(frame) {}

SpectralField::SpectralField(TorusGrid grid, std::vector<cplx> values, Representation rep,
                             Frame frame)
    : grid_(std::move(grid)), values_(std::move(values)), rep_(rep), frame_(frame) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("field value count does not match grid size");
  }
}

SpectralField SpectralField::from_function(const TorusGrid& grid,
                                           const std::function<cplx(std::span<const double>)>& fn,
                                           Frame frame) {
  SpectralField f(grid, Representation::physical, frame);
  std::array<double, TorusGrid::kMaxDim> x{};
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const auto idx = grid.unflatten(flat);
    for (int a = 0; a < grid.dim(); ++a) x[a] = grid.position(a, idx[a]);
    f.values_[flat] = fn(std::span<const double>(x.data(), grid.dim()));
  }
  return f;
}

void SpectralField::make_fourier() {
  if (rep_ == Representation::fourier) return;
  fft::forward(grid_, values_);
  rep_ = Representation::fourier;
}

void SpectralField::make_physical() {
  if (rep_ == Representation::physical) return;
  fft::inverse(grid_, values_);
  rep_ = Representation::physical;
}

SpectralField SpectralField::to_fourier() const {
  SpectralField out = *this;
  out.make_fourier();
  return out;
}

SpectralField SpectralField::to_physical() const {
  SpectralField out = *this;
  out.make_physical();
  return out;
}

SpectralField SpectralField::in(Representation rep) const {
  return rep == Representation::fourier ? to_fourier() : to_physical();
}

SpectralField SpectralField::conj() const {
  SpectralField out = to_physical();
  for (auto& z : out.values_) z = std::conj(z);
  return out;
}

void SpectralField::require_same_grid(const SpectralField& other) const {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("fields live on different grids");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(other);
  const SpectralField rhs = other.in(rep_);
  kernels::axpy(values_, 1.0, rhs.values_);
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(other);
  const SpectralField rhs = other.in(rep_);
  kernels::axpy(values_, -1.0, rhs.values_);
  return *this;
}

SpectralField& SpectralField::operator*=(cplx scale) {
  for (auto& z : values_) z *= scale;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(cplx s, SpectralField a) { return a *= s; }

SpectralField pointwise_product(const SpectralField& a, const SpectralField& b) {
  a.require_same_grid(b);
  SpectralField out = a.to_physical();
  const SpectralField bp = b.to_physical();
  auto ov = out.values();
  auto bv = bp.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] *= bv[i];
  return out;
}

double max_abs_difference(const SpectralField& a, const SpectralField& b) {
  a.require_same_grid(b);
  return kernels::max_abs((a.to_physical() - b.to_physical()).values());
}

}  // namespace kgl
