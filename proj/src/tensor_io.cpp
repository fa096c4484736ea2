#include "pnpmri/tensor_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>

namespace pnpmri {

namespace {

constexpr std::size_t kMaxHeaderBytes = 1 << 20;

inline std::uint64_t to_le_bits(double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, sizeof(u));
  if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
  return u;
}

inline double from_le_bits(std::uint64_t u) {
  if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
  double v;
  std::memcpy(&v, &u, sizeof(v));
  return v;
}

}  // namespace

void tensor_write(const ComplexTensor& t, std::ostream& out) {
  require_finite(t, "tensor_write");
  std::string header = R"({"dtype":"c128","order":"row-major","shape":[)";
  for (std::size_t i = 0; i < t.shape.size(); ++i) {
    if (i) header += ',';
    header += std::to_string(t.shape[i]);
  }
  header += "]}\n";
  out.write(header.data(), static_cast<std::streamsize>(header.size()));

  std::vector<std::uint64_t> buf(2 * t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    buf[2 * i] = to_le_bits(t.data[i].real());
    buf[2 * i + 1] = to_le_bits(t.data[i].imag());
  }
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(std::uint64_t)));
  if (!out) throw IoError("tensor_write: stream write failed");
}

void tensor_write(const ComplexTensor& t, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("tensor_write: cannot open " + path);
  tensor_write(t, f);
  f.flush();
  if (!f) throw IoError("tensor_write: short write to " + path);
}

ComplexTensor tensor_read(std::istream& in, bool expect_eof) {
  std::string header;
  char c;
  while (in.get(c)) {
    if (c == '\n') break;
    header.push_back(c);
    if (header.size() > kMaxHeaderBytes) throw MalformedHeaderError("tensor_read: header too long");
  }
  if (!in) throw MalformedHeaderError("tensor_read: no header line");

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedHeaderError(std::string("tensor_read: header is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("dtype", "") != "c128" || j.value("order", "") != "row-major" ||
      !j.contains("shape") || !j["shape"].is_array())
    throw MalformedHeaderError("tensor_read: header missing required fields");

  Shape shape;
  std::size_t n = 1;
  for (const auto& d : j["shape"]) {
    if (!d.is_number_unsigned() || d.get<std::uint64_t>() == 0)
      throw MalformedHeaderError("tensor_read: shape entries must be positive integers");
    const std::size_t dim = d.get<std::size_t>();
    if (dim > (std::size_t(1) << 31) / n)  // overflow / absurd-size guard
      throw MalformedHeaderError("tensor_read: declared shape is implausibly large");
    n *= dim;
    shape.push_back(dim);
  }
  std::vector<std::uint64_t> buf(2 * n);
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(std::uint64_t)));
  if (static_cast<std::size_t>(in.gcount()) != buf.size() * sizeof(std::uint64_t))
    throw TruncatedPayloadError("tensor_read: payload ended after " + std::to_string(in.gcount()) +
                                " bytes, expected " + std::to_string(buf.size() * 8));
  if (expect_eof) {
    char probe;
    if (in.get(probe))
      throw PayloadMismatchError("tensor_read: trailing bytes after declared payload");
  }

  ComplexTensor t(shape);
  for (std::size_t i = 0; i < n; ++i)
    t.data[i] = cplx(from_le_bits(buf[2 * i]), from_le_bits(buf[2 * i + 1]));
  require_finite(t, "tensor_read");
  return t;
}

ComplexTensor tensor_read(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("tensor_read: cannot open " + path);
  return tensor_read(f, /*expect_eof=*/true);
}

}  // namespace pnpmri
