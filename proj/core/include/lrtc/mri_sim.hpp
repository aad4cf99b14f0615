#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrtc/sampling.hpp"
#include "lrtc/tensor.hpp"

namespace lrtc {

/// Synthetic phantom: Tucker-random image plus sparse spikes plus noise.
struct PhantomSpec {
  Shape shape;
  std::vector<std::size_t> tucker_ranks;
  double sparse_fraction = 0.0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

struct Phantom {
  DenseTensor image;
  DenseTensor kspace;
};

/// Cartesian mask: fibers along readout_mode, a centered block of lines plus
/// random lines elsewhere.
struct MaskSpec {
  Shape shape;
  std::size_t readout_mode = 0;
  double center_fraction = 0.0;
  double random_line_fraction = 0.0;
  std::uint64_t seed = 0;
};

struct MetricsRow {
  int trial = 0;
  int round = 0;
  std::string method;
  std::size_t observed_count = 0;
  double sampling_ratio = 0.0;
  double k_test = 0.0;
  double ser_db = 0.0;
  double psnr_db = 0.0;
  std::int64_t wall_ms = 0;
};

/// The low-rank part is scaled to unit RMS magnitude; spikes have magnitude 3
/// and uniform phase; noise is circular Gaussian with E|n|^2 = noise_sigma^2.
Phantom synth_ground_truth(const PhantomSpec& spec);

/// Mode-k product: replaces mode k of t by factor * (mode-k fibers).
DenseTensor mode_product(const DenseTensor& t, const Matrix& factor, std::size_t mode);

/// Number of fibers (transverse lines) along a mode.
std::size_t line_count(const Shape& shape, std::size_t readout_mode);

/// Offsets of the fiber with the given transverse line index. Lines are
/// numbered in row-major order of the remaining coordinates.
std::vector<std::size_t> fiber_offsets(const Shape& shape, std::size_t readout_mode, std::size_t line);

/// Transverse line indices observed by a mask (sorted).
std::vector<std::size_t> mask_lines(const MaskSpec& m);

ObservationSet init_cartesian_mask(const MaskSpec& m, const DenseTensor& truth);

/// One pattern per fully unobserved fiber; the pattern id is its line index.
std::vector<Pattern> enumerate_fiber_patterns(const Shape& shape, std::size_t readout_mode,
                                              const ObservationSet& omega);

ObservationSet acquire(const DenseTensor& truth, ObservationSet omega, std::span<const Pattern> batch);

/// ||M - T||^2 / ||T||^2.
double k_test(const DenseTensor& recon, const DenseTensor& truth);

/// -10 log10(||I_res| - |I_full|| / ||I_full||) on magnitude images; +inf when
/// identical.
double ser(const DenseTensor& recon, const DenseTensor& full);

/// 20 log10(max|I_res| / sqrt(MSE)) on magnitude images; +inf when MSE = 0.
double psnr(const DenseTensor& recon, const DenseTensor& full);

}  // namespace lrtc
