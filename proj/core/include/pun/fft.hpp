#pragma once

#include <cstddef>
#include <span>

#include "pun/image.hpp"

namespace pun {

enum class FftDirection { Forward, Inverse };

/// Orthonormal 2-D DFT with the zero frequency at the array centre
/// (ifftshift -> DFT -> fftshift, scaled by 1/sqrt(HW) in both directions).
/// `in` and `out` must not alias. Thread-safe.
void centered_fft2(std::span<const cplx> in, std::span<cplx> out, std::size_t height,
                   std::size_t width, FftDirection direction);

}  // namespace pun
