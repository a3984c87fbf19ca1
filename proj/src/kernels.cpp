#include "kgl/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace kgl::kernels {

namespace {

constexpr std::ptrdiff_t kBlock = 4096;

std::ptrdiff_t block_count(std::size_t n) {
  return (static_cast<std::ptrdiff_t>(n) + kBlock - 1) / kBlock;
}

// Blocked reduction: block partial sums in parallel, combined serially in
// block order.
template <typename Body>
double blocked_sum(std::size_t n, Body body) {
  const std::ptrdiff_t nb = block_count(n);
  if (nb <= 1) return body(std::size_t{0}, n);
  std::vector<double> partial(nb);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b * kBlock);
    const std::size_t hi = std::min(n, lo + static_cast<std::size_t>(kBlock));
    partial[b] = body(lo, hi);
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

double pow_abs(cplx z, double p) {
  const double a = std::abs(z);
  if (p == 2.0) return std::norm(z);
  if (p == 4.0) {
    const double n = std::norm(z);
    return n * n;
  }
  return std::pow(a, p);
}

}  // namespace

void scale_by_symbol(std::span<cplx> data, std::span<const double> symbol) {
  const auto n = static_cast<std::ptrdiff_t>(data.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) data[i] *= symbol[i];
}

void cubic(std::span<const cplx> u, std::span<cplx> out, double coeff) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = coeff * std::norm(u[i]) * u[i];
}

void phase_rotate(std::span<cplx> v, double coeff) {
  const auto n = static_cast<std::ptrdiff_t>(v.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) v[i] *= std::polar(1.0, coeff * std::norm(v[i]));
}

void apply_2x2(std::span<cplx> a, std::span<cplx> b, std::span<const cplx> m00,
               std::span<const cplx> m01, std::span<const cplx> m10, std::span<const cplx> m11) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const cplx x = a[i];
    const cplx y = b[i];
    a[i] = m00[i] * x + m01[i] * y;
    b[i] = m10[i] * x + m11[i] * y;
  }
}

void axpy(std::span<cplx> y, cplx alpha, std::span<const cplx> x) {
  const auto n = static_cast<std::ptrdiff_t>(y.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double weighted_sum_sq(std::span<const cplx> data, std::span<const double> w) {
  return blocked_sum(data.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    if (w.empty()) {
      for (std::size_t i = lo; i < hi; ++i) s += std::norm(data[i]);
    } else {
      for (std::size_t i = lo; i < hi; ++i) s += w[i] * std::norm(data[i]);
    }
    return s;
  });
}

double sum_abs_pow(std::span<const cplx> data, double p) {
  return blocked_sum(data.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += pow_abs(data[i], p);
    return s;
  });
}

double max_abs(std::span<const cplx> data) {
  double m = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(data.size());
#pragma omp parallel for reduction(max : m) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(data[i]));
  return m;
}

bool all_finite(std::span<const cplx> data) {
  int bad = 0;
  const auto n = static_cast<std::ptrdiff_t>(data.size());
#pragma omp parallel for reduction(+ : bad) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    bad += !(std::isfinite(data[i].real()) && std::isfinite(data[i].imag()));
  }
  return bad == 0;
}

namespace serial {

void scale_by_symbol(std::span<cplx> data, std::span<const double> symbol) {
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= symbol[i];
}

void cubic(std::span<const cplx> u, std::span<cplx> out, double coeff) {
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = coeff * std::norm(u[i]) * u[i];
}

void phase_rotate(std::span<cplx> v, double coeff) {
  for (auto& z : v) z *= std::polar(1.0, coeff * std::norm(z));
}

void apply_2x2(std::span<cplx> a, std::span<cplx> b, std::span<const cplx> m00,
               std::span<const cplx> m01, std::span<const cplx> m10, std::span<const cplx> m11) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const cplx x = a[i];
    const cplx y = b[i];
    a[i] = m00[i] * x + m01[i] * y;
    b[i] = m10[i] * x + m11[i] * y;
  }
}

void axpy(std::span<cplx> y, cplx alpha, std::span<const cplx> x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

double weighted_sum_sq(std::span<const cplx> data, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) s += (w.empty() ? 1.0 : w[i]) * std::norm(data[i]);
  return s;
}

double sum_abs_pow(std::span<const cplx> data, double p) {
  double s = 0.0;
  for (const auto& z : data) s += pow_abs(z, p);
  return s;
}

double max_abs(std::span<const cplx> data) {
  double m = 0.0;
  for (const auto& z : data) m = std::max(m, std::abs(z));
  return m;
}

bool all_finite(std::span<const cplx> data) {
  return std::all_of(data.begin(), data.end(), [](cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

}  // namespace serial

}  // namespace kgl::kernels
