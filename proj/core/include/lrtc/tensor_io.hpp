#pragma once

#include <filesystem>
#include <iosfwd>

#include "lrtc/tensor.hpp"

namespace lrtc {

/// Binary tensor file, all integers and floats little-endian:
///   "ATNS" | u16 version (1) | u16 ndim | ndim x u64 dims |
///   2 * prod(dims) x f64 interleaved (re, im), row-major element order.
void write_tensor(std::ostream& os, const DenseTensor& t);
DenseTensor read_tensor(std::istream& is);

void write_tensor(const std::filesystem::path& path, const DenseTensor& t);
DenseTensor read_tensor(const std::filesystem::path& path);

}  // namespace lrtc
