#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pnpmri/tensor.hpp"

namespace pnpmri {

/// Per-frame phase-encode sampling. Line indices are raw DFT row indices in
/// [0, ny); the frequency-encode axis (nx) is always fully sampled. The
/// wrapped frequency of line l is min(l, ny - l).
struct SamplingPattern {
  std::size_t nx = 0, ny = 0, nt = 0;
  std::vector<std::vector<std::uint32_t>> frames;  // sorted, unique, same count per frame

  std::size_t lines_per_frame() const { return frames.empty() ? 0 : frames[0].size(); }
  std::size_t samples_per_frame() const { return lines_per_frame() * nx; }

  /// Throws ConfigError on empty frames, duplicate or out-of-range indices,
  /// frame-count mismatch, or uneven per-frame line counts.
  void validate() const;

  std::string to_json() const;
  static SamplingPattern from_json(const std::string& text);
};

/// Time-invariant coil sensitivity profiles, stored as a [C, nx, ny] stack.
/// Sum over coils of |S_i|^2 must equal 1 at every pixel (checked to 1e-12).
struct CoilMaps {
  std::size_t C = 0, nx = 0, ny = 0;
  std::vector<cplx> maps;

  const cplx* coil(std::size_t i) const { return maps.data() + i * nx * ny; }
  cplx* coil(std::size_t i) { return maps.data() + i * nx * ny; }

  void validate(double tol = 1e-12) const;

  ComplexTensor as_tensor() const;
  static CoilMaps from_tensor(const ComplexTensor& t);
};

}  // namespace pnpmri
