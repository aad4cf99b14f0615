#include "lrtc/tensor_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>
#include <vector>

namespace lrtc {

namespace {

constexpr std::array<char, 4> kMagic{'A', 'T', 'N', 'S'};
constexpr std::uint16_t kVersion = 1;

template <typename U>
void put_le(std::vector<char>& out, U value) {
  for (std::size_t b = 0; b < sizeof(U); ++b) out.push_back(static_cast<char>((value >> (8 * b)) & 0xFF));
}

template <typename U>
U get_le(const char* p) {
  U value = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b)
    value |= static_cast<U>(static_cast<unsigned char>(p[b])) << (8 * b);
  return value;
}

}  // namespace

void write_tensor(std::ostream& os, const DenseTensor& t) {
  const auto& dims = t.shape().dims();
  std::vector<char> buf;
  buf.reserve(8 + 8 * dims.size() + 16 * t.size());
  buf.insert(buf.end(), kMagic.begin(), kMagic.end());
  put_le<std::uint16_t>(buf, kVersion);
  put_le<std::uint16_t>(buf, static_cast<std::uint16_t>(dims.size()));
  for (auto d : dims) put_le<std::uint64_t>(buf, d);
  for (const auto& z : t.data()) {
    put_le<std::uint64_t>(buf, std::bit_cast<std::uint64_t>(z.real()));
    put_le<std::uint64_t>(buf, std::bit_cast<std::uint64_t>(z.imag()));
  }
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!os) throw Error("tensor write failed");
}

DenseTensor read_tensor(std::istream& is) {
  const std::vector<char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (bytes.size() < 8) throw Error("truncated header: " + std::to_string(bytes.size()) + " bytes");
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) throw Error("bad magic");
  const auto version = get_le<std::uint16_t>(bytes.data() + 4);
  if (version != kVersion) throw Error("unsupported version " + std::to_string(version));
  const auto ndim = get_le<std::uint16_t>(bytes.data() + 6);
  const std::size_t header = 8 + 8 * static_cast<std::size_t>(ndim);
  if (bytes.size() < header) throw Error("truncated header: " + std::to_string(bytes.size()) + " bytes");

  std::vector<std::size_t> dims(ndim);
  std::uint64_t count = 1;
  for (std::size_t k = 0; k < ndim; ++k) {
    const auto d = get_le<std::uint64_t>(bytes.data() + 8 + 8 * k);
    if (d != 0 && count > (std::uint64_t{1} << 59) / d) throw Error("header dims overflow");
    dims[k] = static_cast<std::size_t>(d);
    count *= d;
  }
  const std::uint64_t expected = 16 * count;
  const std::uint64_t actual = bytes.size() - header;
  if (expected != actual)
    throw Error("payload size mismatch: header expects " + std::to_string(expected) + " bytes, file has " +
                std::to_string(actual) + " bytes");

  Shape shape(std::move(dims));
  DenseTensor t(shape);
  const char* p = bytes.data() + header;
  for (auto& z : t.data()) {
    const double re = std::bit_cast<double>(get_le<std::uint64_t>(p));
    const double im = std::bit_cast<double>(get_le<std::uint64_t>(p + 8));
    z = Complex(re, im);
    p += 16;
  }
  return t;
}

void write_tensor(const std::filesystem::path& path, const DenseTensor& t) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  write_tensor(os, t);
}

DenseTensor read_tensor(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  return read_tensor(is);
}

}  // namespace lrtc
