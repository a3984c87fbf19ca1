#pragma once

#include <map>
#include <vector>

#include "kgl/field.hpp"

namespace kgl {

struct NormRequest {
  std::vector<double> lp;       ///< p in [1, ∞]; use infinity() for L^∞
  std::vector<double> sobolev;  ///< γ in [−2, 6]
};

struct NormReport {
  double l2 = 0.0;
  std::map<double, double> hdot;  ///< Ḣ^γ
  std::map<double, double> h;     ///< H^γ
  std::map<double, double> lp;
};

/// L^p by cell-volume quadrature; Ḣ^γ and H^γ by Fourier-side sums.
/// Throws NumericalError on non-finite input.
NormReport norms(const SpectralField& f, const NormRequest& request = {});

double l2_norm(const SpectralField& f);
double lp_norm(const SpectralField& f, double p);
double sobolev_norm(const SpectralField& f, double gamma, bool homogeneous = false);
/// Re ⟨f, g⟩_{L²} and the full complex inner product.
cplx inner_product(const SpectralField& f, const SpectralField& g);

/// Accumulates ‖f‖_{L^q_t L^r_x} over time slices of given width.
class SpacetimeAccumulator {
 public:
  SpacetimeAccumulator(double q, double r) : q_(q), r_(r) {}
  /// The L^{2(d+2)/d}_{tx} instance.
  static SpacetimeAccumulator strichartz_diagonal(int dim);

  void add_slice(const SpectralField& f, double width);
  double value() const;

 private:
  double q_;
  double r_;
  double sum_ = 0.0;
  double max_ = 0.0;  // for q = ∞
};

}  // namespace kgl
