#pragma once

#include <iosfwd>
#include <string>

#include "pnpmri/tensor.hpp"

namespace pnpmri {

// Tensor file format (".ct"): one UTF-8 JSON header line
//   {"dtype":"c128","order":"row-major","shape":[...]}\n
// followed immediately by numel(shape) complex values as interleaved
// little-endian IEEE-754 float64 pairs (re, im). No padding, no trailing bytes.

void tensor_write(const ComplexTensor& t, std::ostream& out);
void tensor_write(const ComplexTensor& t, const std::string& path);

/// `expect_eof` enforces "no trailing bytes" (true for files; the pipe
/// protocol reads exactly one tensor from a stream that is then closed).
ComplexTensor tensor_read(std::istream& in, bool expect_eof = true);
ComplexTensor tensor_read(const std::string& path);

}  // namespace pnpmri
