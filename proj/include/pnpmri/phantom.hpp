#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pnpmri/sampling.hpp"
#include "pnpmri/tensor.hpp"

namespace pnpmri {

/// Soft ellipse with optional per-frame radius modulation. Geometry is in
/// normalized [0,1]^2 coordinates.
struct Ellipse {
  double cx = 0.5, cy = 0.5;
  double ax = 0.2, ay = 0.2;     // semi-axes, must be > 0
  double intensity = 1.0;
  double mod_amp = 0.0;          // radius scale amplitude across frames
  double mod_phase = 0.0;
};

/// Deterministic synthetic cine: same spec gives bit-identical output.
struct PhantomSpec {
  std::size_t nx = 64, ny = 64, nt = 8;
  std::vector<Ellipse> ellipses;
  double edge = 0.04;        // soft indicator edge width
  double phase_ramp_x = 0.3; // cycles of phase across the FOV
  double phase_ramp_y = 0.2;
  std::uint64_t seed = 0;    // used by random_phantom_spec, carried for provenance
};

/// Sum of smooth ellipse indicators, magnitude clamped to [0,1], with a
/// linear complex phase ramp.
ComplexTensor make_phantom(const PhantomSpec& spec);

/// Convenience generator: n_ellipses with randomized geometry/modulation.
PhantomSpec random_phantom_spec(std::size_t nx, std::size_t ny, std::size_t nt,
                                std::size_t n_ellipses, std::uint64_t seed);

/// C smooth complex Gaussian-bump profiles with randomized centers and linear
/// phases, sum-of-squares normalized pointwise.
CoilMaps make_coilmaps(std::size_t nx, std::size_t ny, std::size_t C, std::uint64_t seed);

enum class SamplingScheme { uniform_random, variable_density };

/// round(ny/R) lines per frame: acs_lines wrapped-central lines always
/// included, the rest drawn without replacement (variable density weight
/// (1 - |k|/k_max)^d on the wrapped frequency). Distinct per-frame sub-seeds.
SamplingPattern make_sampling(std::size_t nx, std::size_t ny, std::size_t nt, double R,
                              SamplingScheme scheme, double density_exponent,
                              std::size_t acs_lines, std::uint64_t seed);

/// Circularly symmetric complex AWGN calibrated so the expected SNR matches
/// snr_db; returns the noisy stack and the variance actually used. An
/// infinite snr_db returns (y, 0): solvers needing sigma2 > 0 must floor it.
std::pair<ComplexTensor, double> add_noise(const ComplexTensor& y, double snr_db,
                                           std::uint64_t seed);

}  // namespace pnpmri
