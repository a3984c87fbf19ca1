#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace kgl {

/// Periodic box [-L/2, L/2)^d sampled on a power-of-two lattice.
///
/// Flat indices are row-major with the last axis fastest (the FFTW layout).
/// Per-axis wave numbers follow the DFT ordering: index k maps to
/// m = k for k < n/2 and m = k - n otherwise, so the Nyquist index carries
/// m = -n/2 and the lattice is {-n/2, ..., n/2 - 1} * 2π/L.
class TorusGrid {
 public:
  static constexpr int kMaxDim = 3;

  TorusGrid() = default;

  int dim() const { return dim_; }
  double extent(int axis) const { return extent_[axis]; }
  int points(int axis) const { return points_[axis]; }
  double spacing(int axis) const { return extent_[axis] / points_[axis]; }
  std::size_t size() const { return size_; }
  double cell_volume() const;
  /// Lebesgue measure of the box.
  double measure() const;

  /// Physical coordinate of lattice index j on an axis.
  double position(int axis, int j) const;
  /// Signed integer frequency index of DFT index k on an axis.
  int mode_index(int axis, int k) const;
  /// Angular frequency 2π m / L of DFT index k on an axis.
  double wavenumber(int axis, int k) const;
  bool is_nyquist(int axis, int k) const { return 2 * k == points_[axis]; }
  /// Largest |ξ| along one axis (the Nyquist magnitude).
  double max_wavenumber(int axis) const;

  /// |ξ|² for every flat index; shared between copies of the grid.
  std::span<const double> xi_squared() const { return *xi2_; }

  /// Decompose a flat index into per-axis indices.
  std::array<int, kMaxDim> unflatten(std::size_t flat) const;

  bool operator==(const TorusGrid& other) const;

 private:
  friend TorusGrid make_grid(std::span<const double>, std::span<const int>);

  int dim_ = 0;
  std::array<double, kMaxDim> extent_{};
  std::array<int, kMaxDim> points_{1, 1, 1};
  std::size_t size_ = 0;
  std::shared_ptr<const std::vector<double>> xi2_;
};

/// Same extent and point count on every axis.
TorusGrid make_grid(int dim, double extent, int points);
TorusGrid make_grid(std::span<const double> extents, std::span<const int> points);

}  // namespace kgl
