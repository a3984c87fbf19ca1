#pragma once

#include <span>

#include "kgl/field.hpp"

namespace kgl::fft {

/// Unnormalized forward DFT, in place.
void forward(const TorusGrid& grid, std::span<cplx> data);
/// Inverse DFT including the 1/n normalization, in place.
void inverse(const TorusGrid& grid, std::span<cplx> data);

}  // namespace kgl::fft
