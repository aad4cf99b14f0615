#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lrtc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Raised for contract violations: bad shapes, indices, parameters, formats.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A solver iterate became NaN/Inf (divergence or bad parameters).
class NonFiniteError : public Error {
public:
  using Error::Error;
};

/// 0-based coordinates, one per mode.
using MultiIndex = std::vector<std::size_t>;

/// Mode sizes (I_1, ..., I_n). Elements are addressed in row-major order:
/// the last coordinate varies fastest.
class Shape {
public:
  Shape() = default;
  explicit Shape(std::vector<std::size_t> dims);
  Shape(std::initializer_list<std::size_t> dims) : Shape(std::vector<std::size_t>(dims)) {}

  std::size_t modes() const { return dims_.size(); }
  std::size_t dim(std::size_t mode) const { return dims_.at(mode); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t size() const { return size_; }

  /// Row-major stride of a mode.
  std::size_t stride(std::size_t mode) const { return strides_[mode]; }

  std::size_t offset(const MultiIndex& idx) const;
  MultiIndex coords(std::size_t offset) const;
  bool contains(const MultiIndex& idx) const;

  /// Rows and columns of the mode-k unfolding.
  std::size_t unfolded_cols(std::size_t mode) const { return size_ / dims_.at(mode); }

  std::string to_string() const;

  friend bool operator==(const Shape& a, const Shape& b) { return a.dims_ == b.dims_; }

private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

/// Dense complex tensor with interleaved double storage.
class DenseTensor {
public:
  DenseTensor() = default;
  explicit DenseTensor(Shape shape);
  DenseTensor(Shape shape, std::vector<Complex> data);

  static DenseTensor zeros(const Shape& shape) { return DenseTensor(shape); }
  static DenseTensor constant(const Shape& shape, Complex value);

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  Complex& operator[](std::size_t offset) { return data_[offset]; }
  const Complex& operator[](std::size_t offset) const { return data_[offset]; }
  Complex& at(const MultiIndex& idx) { return data_[shape_.offset(idx)]; }
  const Complex& at(const MultiIndex& idx) const { return data_[shape_.offset(idx)]; }

  bool all_finite() const;

  DenseTensor& operator+=(const DenseTensor& other);
  DenseTensor& operator-=(const DenseTensor& other);
  DenseTensor& operator*=(double scale);

  friend DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
  friend DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
  friend DenseTensor operator*(DenseTensor a, double s) { return a *= s; }
  friend DenseTensor operator*(double s, DenseTensor a) { return a *= s; }
  friend bool operator==(const DenseTensor& a, const DenseTensor& b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

private:
  Shape shape_;
  std::vector<Complex> data_;
};

/// Observed entries Omega with their measured values. Offsets are kept sorted
/// and unique, which is lexicographic MultiIndex order.
class ObservationSet {
public:
  ObservationSet() = default;
  explicit ObservationSet(Shape shape) : shape_(std::move(shape)) {}

  /// Builds from arbitrary offsets; duplicates or out-of-range offsets throw.
  static ObservationSet from_offsets(const Shape& shape, std::vector<std::size_t> offsets,
                                     const DenseTensor& source);

  const Shape& shape() const { return shape_; }
  std::size_t count() const { return offsets_.size(); }
  bool empty() const { return offsets_.empty(); }
  double sampling_ratio() const {
    return shape_.size() == 0 ? 0.0 : static_cast<double>(count()) / static_cast<double>(shape_.size());
  }

  std::span<const std::size_t> offsets() const { return offsets_; }
  std::span<const Complex> values() const { return values_; }
  std::vector<MultiIndex> indices() const;

  bool contains(std::size_t offset) const;
  /// Dense membership mask in row-major order.
  std::vector<bool> mask() const;

  /// Adds new entries. Offsets already present throw.
  void insert(std::span<const std::size_t> offsets, const DenseTensor& source);

private:
  Shape shape_;
  std::vector<std::size_t> offsets_;
  std::vector<Complex> values_;
};

/// Mode-k matricization. Column index follows the Kolda-Bader ordering:
/// j = sum_{m != k} i_m * J_m with J_m = prod_{l < m, l != k} I_l.
Matrix unfold(const DenseTensor& t, std::size_t mode);

/// Inverse of unfold for the same shape and mode.
DenseTensor fold(const Matrix& m, std::size_t mode, const Shape& shape);

double frobenius_norm(const DenseTensor& t);
double squared_norm(const DenseTensor& t);

DenseTensor hadamard(const DenseTensor& a, const DenseTensor& b);

/// Copy of t with the entries at Omega replaced by the observed values.
DenseTensor scatter_observed(const DenseTensor& t, const ObservationSet& omega);

/// Real inner product Re <a, b> = Re sum conj(a) b.
double inner_real(const DenseTensor& a, const DenseTensor& b);

void require_same_shape(const Shape& a, const Shape& b, const char* what);

}  // namespace lrtc
