#pragma once

#include <string>

#include "pnpmri/tensor.hpp"

namespace pnpmri {

/// Nearest-rank percentile (q in [0,100]) of the entrywise magnitudes.
double magnitude_percentile(const ComplexTensor& t, double q);

/// 8-bit binary PGM of |frame t| of a [nx,ny,nt] cine, scaled so `white`
/// maps to 255 (values clamp). gain multiplies magnitudes first (error maps
/// use gain 6).
void write_magnitude_pgm(const ComplexTensor& cine, std::size_t frame, double white, double gain,
                         const std::string& path);

}  // namespace pnpmri
