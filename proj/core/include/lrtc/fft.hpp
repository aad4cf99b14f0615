#pragma once

#include "lrtc/tensor.hpp"

namespace lrtc {

/// Multidimensional DFT over every mode, image space -> k-space, scaled by
/// 1/sqrt(N) so the transform is unitary. Any mode lengths are accepted.
DenseTensor fft_forward(const DenseTensor& t);

/// Inverse of fft_forward (also unitary).
DenseTensor fft_inverse(const DenseTensor& t);

}  // namespace lrtc
