#pragma once

#include <cstdint>
#include <vector>

#include "pnpmri/tensor.hpp"

namespace pnpmri {

/// One mixing step of the splitmix64 stream; advances `state` and returns the output.
std::uint64_t splitmix64_next(std::uint64_t& state);

/// Deterministic child seed for stream k of a master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// xoshiro256** seeded from a 64-bit seed via splitmix64 expansion. Fully
/// portable: same seed gives the same sequence on every platform.
/// Single-owner; not shareable across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();

  /// Deterministic child stream k of a master seed (seed-splitting).
  static Rng derive(std::uint64_t seed, std::uint64_t stream);

  double uniform();                 // [0, 1), 53-bit
  double uniform_open();            // (0, 1]
  double normal();                  // N(0,1), Box-Muller with cached spare
  cplx cnormal(double var);         // circularly symmetric CN(0, var)
  std::uint64_t below(std::uint64_t bound);  // uniform in [0, bound)

  ComplexTensor normal_tensor(const Shape& shape, double var = 1.0);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t s_[4];
  std::uint64_t seed_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// k distinct indices from [0, n) drawn without replacement, uniformly.
std::vector<std::uint32_t> sample_without_replacement(Rng& rng, std::uint32_t n, std::uint32_t k);

/// k distinct indices from [0, n) without replacement, probability proportional
/// to weights (sequential draws with renormalization). weights must be >= 0 and
/// have at least k strictly positive entries.
std::vector<std::uint32_t> weighted_sample_without_replacement(Rng& rng,
                                                               const std::vector<double>& weights,
                                                               std::uint32_t k);

}  // namespace pnpmri
