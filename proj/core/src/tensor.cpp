#include "lrtc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace lrtc {

namespace {

/// Walks every element in row-major order, tracking its mode-k unfolding
/// column. Calls fn(offset, row, col).
template <typename Fn>
void for_each_unfolded(const Shape& shape, std::size_t mode, Fn&& fn) {
  const std::size_t n = shape.modes();
  std::vector<std::size_t> col_stride(n, 0);
  std::size_t acc = 1;
  for (std::size_t m = 0; m < n; ++m) {
    if (m == mode) continue;
    col_stride[m] = acc;
    acc *= shape.dim(m);
  }
  std::vector<std::size_t> c(n, 0);
  std::size_t col = 0;
  const std::size_t total = shape.size();
  for (std::size_t off = 0; off < total; ++off) {
    fn(off, c[mode], col);
    for (std::size_t m = n; m-- > 0;) {
      if (++c[m] < shape.dim(m)) {
        col += col_stride[m];
        break;
      }
      col -= (shape.dim(m) - 1) * col_stride[m];
      c[m] = 0;
    }
  }
}

}  // namespace

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.size() < 2) throw Error("shape needs at least 2 modes, got " + std::to_string(dims_.size()));
  strides_.assign(dims_.size(), 1);
  size_ = 1;
  for (std::size_t m = dims_.size(); m-- > 0;) {
    if (dims_[m] == 0) throw Error("shape has a zero-length mode: " + to_string());
    strides_[m] = size_;
    size_ *= dims_[m];
  }
}

std::size_t Shape::offset(const MultiIndex& idx) const {
  if (!contains(idx)) throw Error("index out of range for shape " + to_string());
  std::size_t off = 0;
  for (std::size_t m = 0; m < dims_.size(); ++m) off += idx[m] * strides_[m];
  return off;
}

MultiIndex Shape::coords(std::size_t offset) const {
  if (offset >= size_) throw Error("offset out of range for shape " + to_string());
  MultiIndex idx(dims_.size());
  for (std::size_t m = 0; m < dims_.size(); ++m) {
    idx[m] = offset / strides_[m];
    offset %= strides_[m];
  }
  return idx;
}

bool Shape::contains(const MultiIndex& idx) const {
  if (idx.size() != dims_.size()) return false;
  for (std::size_t m = 0; m < dims_.size(); ++m)
    if (idx[m] >= dims_[m]) return false;
  return true;
}

std::string Shape::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t m = 0; m < dims_.size(); ++m) os << (m ? "," : "") << dims_[m];
  os << ')';
  return os.str();
}

DenseTensor::DenseTensor(Shape shape) : shape_(std::move(shape)), data_(shape_.size(), Complex{}) {}

DenseTensor::DenseTensor(Shape shape, std::vector<Complex> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != shape_.size())
    throw Error("tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                shape_.to_string());
}

DenseTensor DenseTensor::constant(const Shape& shape, Complex value) {
  return DenseTensor(shape, std::vector<Complex>(shape.size(), value));
}

bool DenseTensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  require_same_shape(shape_, other.shape_, "tensor addition");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& other) {
  require_same_shape(shape_, other.shape_, "tensor subtraction");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseTensor& DenseTensor::operator*=(double scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

ObservationSet ObservationSet::from_offsets(const Shape& shape, std::vector<std::size_t> offsets,
                                            const DenseTensor& source) {
  ObservationSet omega(shape);
  omega.insert(offsets, source);
  return omega;
}

std::vector<MultiIndex> ObservationSet::indices() const {
  std::vector<MultiIndex> out;
  out.reserve(offsets_.size());
  for (auto off : offsets_) out.push_back(shape_.coords(off));
  return out;
}

bool ObservationSet::contains(std::size_t offset) const {
  return std::binary_search(offsets_.begin(), offsets_.end(), offset);
}

std::vector<bool> ObservationSet::mask() const {
  std::vector<bool> m(shape_.size(), false);
  for (auto off : offsets_) m[off] = true;
  return m;
}

void ObservationSet::insert(std::span<const std::size_t> offsets, const DenseTensor& source) {
  require_same_shape(shape_, source.shape(), "observation insert");
  std::vector<std::size_t> added(offsets.begin(), offsets.end());
  std::sort(added.begin(), added.end());
  if (std::adjacent_find(added.begin(), added.end()) != added.end())
    throw Error("duplicate index in observation insert");
  for (auto off : added) {
    if (off >= shape_.size()) throw Error("observation offset out of range for shape " + shape_.to_string());
    if (contains(off)) throw Error("index already observed: offset " + std::to_string(off));
  }
  std::vector<std::size_t> merged;
  merged.reserve(offsets_.size() + added.size());
  std::merge(offsets_.begin(), offsets_.end(), added.begin(), added.end(), std::back_inserter(merged));
  offsets_ = std::move(merged);
  values_.resize(offsets_.size());
  for (std::size_t i = 0; i < offsets_.size(); ++i) values_[i] = source[offsets_[i]];
}

Matrix unfold(const DenseTensor& t, std::size_t mode) {
  const Shape& s = t.shape();
  if (mode >= s.modes())
    throw Error("invalid mode " + std::to_string(mode) + " for shape " + s.to_string());
  Matrix m(static_cast<Eigen::Index>(s.dim(mode)), static_cast<Eigen::Index>(s.unfolded_cols(mode)));
  const auto data = t.data();
  for_each_unfolded(s, mode, [&](std::size_t off, std::size_t row, std::size_t col) {
    m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = data[off];
  });
  return m;
}

DenseTensor fold(const Matrix& m, std::size_t mode, const Shape& shape) {
  if (mode >= shape.modes())
    throw Error("invalid mode " + std::to_string(mode) + " for shape " + shape.to_string());
  if (static_cast<std::size_t>(m.rows()) != shape.dim(mode) ||
      static_cast<std::size_t>(m.cols()) != shape.unfolded_cols(mode))
    throw Error("fold: matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                ", expected " + std::to_string(shape.dim(mode)) + "x" +
                std::to_string(shape.unfolded_cols(mode)) + " for mode " + std::to_string(mode) +
                " of " + shape.to_string());
  DenseTensor t(shape);
  auto data = t.data();
  for_each_unfolded(shape, mode, [&](std::size_t off, std::size_t row, std::size_t col) {
    data[off] = m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  });
  return t;
}

double squared_norm(const DenseTensor& t) {
  double acc = 0.0;
  for (const auto& z : t.data()) acc += std::norm(z);
  return acc;
}

double frobenius_norm(const DenseTensor& t) { return std::sqrt(squared_norm(t)); }

DenseTensor hadamard(const DenseTensor& a, const DenseTensor& b) {
  require_same_shape(a.shape(), b.shape(), "hadamard");
  DenseTensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

DenseTensor scatter_observed(const DenseTensor& t, const ObservationSet& omega) {
  require_same_shape(t.shape(), omega.shape(), "scatter_observed");
  DenseTensor out = t;
  const auto offs = omega.offsets();
  const auto vals = omega.values();
  for (std::size_t i = 0; i < offs.size(); ++i) out[offs[i]] = vals[i];
  return out;
}

double inner_real(const DenseTensor& a, const DenseTensor& b) {
  require_same_shape(a.shape(), b.shape(), "inner product");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return acc;
}

void require_same_shape(const Shape& a, const Shape& b, const char* what) {
  if (!(a == b)) throw Error(std::string(what) + ": shape mismatch " + a.to_string() + " vs " + b.to_string());
}

}  // namespace lrtc
