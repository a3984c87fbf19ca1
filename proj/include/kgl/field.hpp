#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "kgl/grid.hpp"

namespace kgl {

using cplx = std::complex<double>;

enum class Representation { physical, fourier };

/// Which variable the samples hold: u^ε (original), w = e^{it}𝒮_ε v
/// (rescaled), or the modulated profile v.
enum class Frame { original, rescaled, modulated };

/// Complex samples on a torus grid.
///
/// In the fourier representation the values are the unnormalized DFT
/// coefficients F_k = Σ_j f_j e^{-2πi jk/n}; the inverse carries the 1/n.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(TorusGrid grid, Representation rep = Representation::physical,
                         Frame frame = Frame::original);
  SpectralField(TorusGrid grid, std::vector<cplx> values, Representation rep,
                Frame frame = Frame::original);

  /// Sample fn at every lattice point; x has grid.dim() entries.
  static SpectralField from_function(const TorusGrid& grid,
                                     const std::function<cplx(std::span<const double>)>& fn,
                                     Frame frame = Frame::original);

  const TorusGrid& grid() const { return grid_; }
  Representation representation() const { return rep_; }
  Frame frame() const { return frame_; }
  void set_frame(Frame frame) { frame_ = frame; }

  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  SpectralField to_fourier() const;
  SpectralField to_physical() const;
  SpectralField in(Representation rep) const;
  /// In-place conversions.
  void make_fourier();
  void make_physical();

  SpectralField conj() const;
  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(cplx scale);

  /// Throws std::invalid_argument on grid mismatch.
  void require_same_grid(const SpectralField& other) const;

 private:
  TorusGrid grid_;
  std::vector<cplx> values_;
  Representation rep_ = Representation::physical;
  Frame frame_ = Frame::original;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(cplx s, SpectralField a);

/// Pointwise product in physical space.
SpectralField pointwise_product(const SpectralField& a, const SpectralField& b);

/// Max-norm of the difference, both taken in physical space.
double max_abs_difference(const SpectralField& a, const SpectralField& b);

}  // namespace kgl
