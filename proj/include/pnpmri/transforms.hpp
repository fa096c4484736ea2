#pragma once

#include "pnpmri/exec.hpp"
#include "pnpmri/tensor.hpp"

namespace pnpmri {

// Orthonormal multi-level Haar over every axis of extent > 1 (all such axes
// must be divisible by 2^levels). Standard multiresolution layout: lowpass
// halves packed in front along each axis, recursion on the all-low block.
ComplexTensor haar_forward(const ComplexTensor& x, int levels);
ComplexTensor haar_inverse(const ComplexTensor& coeffs, int levels);

// Undecimated (shift-invariant) Haar with circular boundaries, normalized as
// a tight frame: analyze(x) stacks band volumes in front of the image shape,
// and synthesize(analyze(x)) == x (Psi^H Psi = I). Each level splits the
// running lowpass along every axis of extent > 1 with dilation 2^level; band
// order is level-major, bands within a level in ascending per-axis L/H bit
// order (bit set = highpass), final lowpass last.
std::size_t uwt_band_count(const Shape& image_shape, int levels);
ComplexTensor uwt_analyze(const ComplexTensor& x, int levels, ExecPolicy exec = default_exec());
ComplexTensor uwt_synthesize(const ComplexTensor& coeffs, int levels,
                             ExecPolicy exec = default_exec());

}  // namespace pnpmri
