#include "lrtc/mri_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <tuple>

#include "lrtc/fft.hpp"

namespace lrtc {

namespace {

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = Complex(g(rng), g(rng));
  return m;
}

Matrix random_orthonormal(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(rows, cols, rng));
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

/// Transverse coordinates of a line (readout coordinate left at 0).
MultiIndex line_coords(const Shape& shape, std::size_t readout_mode, std::size_t line) {
  MultiIndex c(shape.modes(), 0);
  for (std::size_t m = shape.modes(); m-- > 0;) {
    if (m == readout_mode) continue;
    c[m] = line % shape.dim(m);
    line /= shape.dim(m);
  }
  return c;
}

void check_mode(const Shape& shape, std::size_t mode) {
  if (mode >= shape.modes())
    throw Error("readout mode " + std::to_string(mode) + " invalid for shape " + shape.to_string());
}

void check_same_shape(const DenseTensor& a, const DenseTensor& b, const char* what) {
  require_same_shape(a.shape(), b.shape(), what);
}

}  // namespace

DenseTensor mode_product(const DenseTensor& t, const Matrix& factor, std::size_t mode) {
  if (static_cast<std::size_t>(factor.cols()) != t.shape().dim(mode))
    throw Error("mode_product: factor columns do not match mode size");
  std::vector<std::size_t> dims = t.shape().dims();
  dims[mode] = static_cast<std::size_t>(factor.rows());
  return fold(factor * unfold(t, mode), mode, Shape(dims));
}

Phantom synth_ground_truth(const PhantomSpec& spec) {
  const Shape& shape = spec.shape;
  const std::size_t n = shape.modes();
  if (spec.tucker_ranks.size() != n) throw Error("phantom needs one Tucker rank per mode");
  for (std::size_t k = 0; k < n; ++k)
    if (spec.tucker_ranks[k] < 1 || spec.tucker_ranks[k] > shape.dim(k))
      throw Error("Tucker rank " + std::to_string(spec.tucker_ranks[k]) + " out of range for mode " +
                  std::to_string(k));
  if (!(spec.sparse_fraction >= 0.0 && spec.sparse_fraction < 1.0))
    throw Error("sparse_fraction must lie in [0, 1)");
  if (!(spec.noise_sigma >= 0.0)) throw Error("noise_sigma must be nonnegative");

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> g(0.0, 1.0);

  const Shape core_shape(spec.tucker_ranks);
  DenseTensor image(core_shape);
  for (auto& z : image.data()) z = Complex(g(rng), g(rng));
  for (std::size_t k = 0; k < n; ++k) {
    const auto rows = static_cast<Eigen::Index>(shape.dim(k));
    const auto cols = static_cast<Eigen::Index>(spec.tucker_ranks[k]);
    image = mode_product(image, random_orthonormal(rows, cols, rng), k);
  }
  image *= std::sqrt(static_cast<double>(shape.size())) / frobenius_norm(image);

  const auto spikes = static_cast<std::size_t>(std::llround(spec.sparse_fraction * static_cast<double>(shape.size())));
  if (spikes > 0) {
    std::vector<std::size_t> offsets(shape.size());
    std::iota(offsets.begin(), offsets.end(), std::size_t{0});
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < spikes; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, offsets.size() - 1);
      std::swap(offsets[i], offsets[pick(rng)]);
      image[offsets[i]] += std::polar(3.0, phase(rng));
    }
  }
  if (spec.noise_sigma > 0.0) {
    const double sd = spec.noise_sigma / std::sqrt(2.0);
    for (auto& z : image.data()) z += Complex(sd * g(rng), sd * g(rng));
  }
  Phantom out{image, fft_forward(image)};
  return out;
}

std::size_t line_count(const Shape& shape, std::size_t readout_mode) {
  check_mode(shape, readout_mode);
  return shape.unfolded_cols(readout_mode);
}

std::vector<std::size_t> fiber_offsets(const Shape& shape, std::size_t readout_mode, std::size_t line) {
  if (line >= line_count(shape, readout_mode)) throw Error("fiber line index out of range");
  const std::size_t base = shape.offset(line_coords(shape, readout_mode, line));
  const std::size_t stride = shape.stride(readout_mode);
  std::vector<std::size_t> out(shape.dim(readout_mode));
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = base + t * stride;
  return out;
}

std::vector<std::size_t> mask_lines(const MaskSpec& m) {
  const Shape& shape = m.shape;
  const std::size_t lines = line_count(shape, m.readout_mode);
  if (!(m.center_fraction >= 0.0 && m.center_fraction <= 1.0) ||
      !(m.random_line_fraction >= 0.0 && m.random_line_fraction <= 1.0))
    throw Error("mask fractions must lie in [0, 1]");
  if (m.center_fraction + m.random_line_fraction > 1.0 + 1e-12)
    throw Error("center_fraction + random_line_fraction exceeds the available lines");

  // Center block: lines closest to the middle of every transverse mode, by
  // normalized Chebyshev distance (then summed distance, then line index).
  std::vector<std::tuple<double, double, std::size_t>> order;
  order.reserve(lines);
  for (std::size_t line = 0; line < lines; ++line) {
    const MultiIndex c = line_coords(shape, m.readout_mode, line);
    double cheb = 0.0, sum = 0.0;
    for (std::size_t k = 0; k < shape.modes(); ++k) {
      if (k == m.readout_mode) continue;
      const double size = static_cast<double>(shape.dim(k));
      const double d = std::abs(static_cast<double>(c[k]) + 0.5 - size / 2.0) / size;
      cheb = std::max(cheb, d);
      sum += d;
    }
    order.emplace_back(cheb, sum, line);
  }
  std::sort(order.begin(), order.end());

  const auto n_center = static_cast<std::size_t>(std::llround(m.center_fraction * static_cast<double>(lines)));
  const std::size_t rest = lines - n_center;
  const auto n_random = static_cast<std::size_t>(std::llround(m.random_line_fraction * static_cast<double>(rest)));

  std::vector<std::size_t> chosen;
  chosen.reserve(n_center + n_random);
  for (std::size_t i = 0; i < n_center; ++i) chosen.push_back(std::get<2>(order[i]));

  std::vector<std::size_t> remaining;
  remaining.reserve(rest);
  for (std::size_t i = n_center; i < lines; ++i) remaining.push_back(std::get<2>(order[i]));
  std::sort(remaining.begin(), remaining.end());
  std::mt19937_64 rng(m.seed);
  for (std::size_t i = 0; i < n_random; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, remaining.size() - 1);
    std::swap(remaining[i], remaining[pick(rng)]);
    chosen.push_back(remaining[i]);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

ObservationSet init_cartesian_mask(const MaskSpec& m, const DenseTensor& truth) {
  require_same_shape(m.shape, truth.shape(), "init_cartesian_mask");
  std::vector<std::size_t> offsets;
  for (auto line : mask_lines(m)) {
    auto f = fiber_offsets(m.shape, m.readout_mode, line);
    offsets.insert(offsets.end(), f.begin(), f.end());
  }
  return ObservationSet::from_offsets(m.shape, std::move(offsets), truth);
}

std::vector<Pattern> enumerate_fiber_patterns(const Shape& shape, std::size_t readout_mode,
                                              const ObservationSet& omega) {
  require_same_shape(shape, omega.shape(), "enumerate_fiber_patterns");
  const std::size_t lines = line_count(shape, readout_mode);
  const std::vector<bool> seen = omega.mask();
  std::vector<Pattern> out;
  for (std::size_t line = 0; line < lines; ++line) {
    auto f = fiber_offsets(shape, readout_mode, line);
    if (std::any_of(f.begin(), f.end(), [&](std::size_t off) { return seen[off]; })) continue;
    out.push_back(Pattern{line, std::move(f), readout_mode});
  }
  return out;
}

ObservationSet acquire(const DenseTensor& truth, ObservationSet omega, std::span<const Pattern> batch) {
  require_same_shape(truth.shape(), omega.shape(), "acquire");
  std::vector<std::size_t> offsets;
  for (const auto& p : batch) offsets.insert(offsets.end(), p.elements.begin(), p.elements.end());
  for (auto off : offsets)
    if (off < omega.shape().size() && omega.contains(off))
      throw Error("acquire: batch overlaps the observation set at offset " + std::to_string(off));
  omega.insert(offsets, truth);
  return omega;
}

double k_test(const DenseTensor& recon, const DenseTensor& truth) {
  check_same_shape(recon, truth, "k_test");
  const double ref = squared_norm(truth);
  if (ref == 0.0) throw Error("k_test: reference tensor has zero norm");
  return squared_norm(recon - truth) / ref;
}

double ser(const DenseTensor& recon, const DenseTensor& full) {
  check_same_shape(recon, full, "ser");
  double diff = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    const double a = std::abs(recon[i]), b = std::abs(full[i]);
    diff += (a - b) * (a - b);
    ref += b * b;
  }
  if (ref == 0.0) throw Error("ser: reference image has zero norm");
  if (diff == 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(std::sqrt(diff) / std::sqrt(ref));
}

double psnr(const DenseTensor& recon, const DenseTensor& full) {
  check_same_shape(recon, full, "psnr");
  double sq = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    const double a = std::abs(recon[i]), b = std::abs(full[i]);
    sq += (a - b) * (a - b);
    peak = std::max(peak, a);
  }
  const double mse = sq / static_cast<double>(full.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(peak / std::sqrt(mse));
}

}  // namespace lrtc
