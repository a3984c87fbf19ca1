#include "kgl/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kgl {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

TorusGrid make_grid(int dim, double extent, int points) {
  if (dim < 1 || dim > TorusGrid::kMaxDim) {
    throw std::invalid_argument("grid dimension must be 1, 2 or 3, got " + std::to_string(dim));
  }
  std::vector<double> e(dim, extent);
  std::vector<int> p(dim, points);
  return make_grid(e, p);
}

TorusGrid make_grid(std::span<const double> extents, std::span<const int> points) {
  if (extents.size() != points.size() || extents.empty() ||
      extents.size() > static_cast<std::size_t>(TorusGrid::kMaxDim)) {
    throw std::invalid_argument("grid needs matching extents and point counts for 1..3 axes");
  }
  TorusGrid g;
  g.dim_ = static_cast<int>(extents.size());
  g.size_ = 1;
  for (int a = 0; a < g.dim_; ++a) {
    if (!(extents[a] > 0.0) || !std::isfinite(extents[a])) {
      throw std::invalid_argument("grid extent must be positive on axis " + std::to_string(a));
    }
    if (!is_power_of_two(points[a])) {
      throw std::invalid_argument("grid points not power of two on axis " + std::to_string(a) +
                                  ": " + std::to_string(points[a]));
    }
    if (points[a] < 8) {
      throw std::invalid_argument("grid needs at least 8 points per axis");
    }
    g.extent_[a] = extents[a];
    g.points_[a] = points[a];
    g.size_ *= static_cast<std::size_t>(points[a]);
  }

  auto xi2 = std::make_shared<std::vector<double>>(g.size_);
  for (std::size_t flat = 0; flat < g.size_; ++flat) {
    const auto idx = g.unflatten(flat);
    double s = 0.0;
    for (int a = 0; a < g.dim_; ++a) {
      const double k = g.wavenumber(a, idx[a]);
      s += k * k;
    }
    (*xi2)[flat] = s;
  }
  g.xi2_ = std::move(xi2);
  return g;
}

double TorusGrid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= spacing(a);
  return v;
}

double TorusGrid::measure() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= extent_[a];
  return v;
}

double TorusGrid::position(int axis, int j) const { return -0.5 * extent_[axis] + j * spacing(axis); }

int TorusGrid::mode_index(int axis, int k) const {
  const int n = points_[axis];
  return k < n / 2 ? k : k - n;
}

double TorusGrid::wavenumber(int axis, int k) const {
  return 2.0 * std::numbers::pi * mode_index(axis, k) / extent_[axis];
}

double TorusGrid::max_wavenumber(int axis) const {
  return std::numbers::pi * points_[axis] / extent_[axis];
}

std::array<int, TorusGrid::kMaxDim> TorusGrid::unflatten(std::size_t flat) const {
  std::array<int, kMaxDim> idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % points_[a]);
    flat /= points_[a];
  }
  return idx;
}

bool TorusGrid::operator==(const TorusGrid& other) const {
  if (dim_ != other.dim_) return false;
  for (int a = 0; a < dim_; ++a) {
    if (points_[a] != other.points_[a] || extent_[a] != other.extent_[a]) return false;
  }
  return true;
}

}  // namespace kgl
