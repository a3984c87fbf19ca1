#pragma once

#include <complex>
#include <span>

namespace kgl::kernels {

using cplx = std::complex<double>;

// Pointwise and reduction kernels shared by every solver. The functions in
// kgl::kernels run OpenMP-parallel loops; kgl::kernels::serial holds the
// plain reference loops used by tests and the benchmark.
//
// Reductions sum fixed-size blocks and combine the block sums in index
// order, so the result does not depend on the thread count.

/// data[i] *= symbol[i]
void scale_by_symbol(std::span<cplx> data, std::span<const double> symbol);
/// out[i] = coeff * |u[i]|² u[i]
void cubic(std::span<const cplx> u, std::span<cplx> out, double coeff);
/// v[i] *= exp(i * coeff * |v[i]|²)
void phase_rotate(std::span<cplx> v, double coeff);
/// Per-mode 2x2 update (a, b) <- (m00 a + m01 b, m10 a + m11 b).
void apply_2x2(std::span<cplx> a, std::span<cplx> b, std::span<const cplx> m00,
               std::span<const cplx> m01, std::span<const cplx> m10, std::span<const cplx> m11);
/// y[i] += alpha * x[i]
void axpy(std::span<cplx> y, cplx alpha, std::span<const cplx> x);

/// Σ w[i] |data[i]|²; w may be empty meaning all ones.
double weighted_sum_sq(std::span<const cplx> data, std::span<const double> w);
/// Σ |data[i]|^p
double sum_abs_pow(std::span<const cplx> data, double p);
double max_abs(std::span<const cplx> data);
/// True when every entry is finite.
bool all_finite(std::span<const cplx> data);

namespace serial {

void scale_by_symbol(std::span<cplx> data, std::span<const double> symbol);
void cubic(std::span<const cplx> u, std::span<cplx> out, double coeff);
void phase_rotate(std::span<cplx> v, double coeff);
void apply_2x2(std::span<cplx> a, std::span<cplx> b, std::span<const cplx> m00,
               std::span<const cplx> m01, std::span<const cplx> m10, std::span<const cplx> m11);
void axpy(std::span<cplx> y, cplx alpha, std::span<const cplx> x);
double weighted_sum_sq(std::span<const cplx> data, std::span<const double> w);
double sum_abs_pow(std::span<const cplx> data, double p);
double max_abs(std::span<const cplx> data);
bool all_finite(std::span<const cplx> data);

}  // namespace serial

}  // namespace kgl::kernels
