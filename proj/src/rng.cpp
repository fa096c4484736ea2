#include "pnpmri/rng.hpp"

#include <cmath>

#include "pnpmri/errors.hpp"

namespace pnpmri {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += kGolden);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed) {
  std::uint64_t sm = seed;
  for (auto& s : s_) s = splitmix64_next(sm);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // Counter-based: jump the splitmix state to the stream index, mix once.
  std::uint64_t st = seed + stream * kGolden;
  return splitmix64_next(st);
}

Rng Rng::derive(std::uint64_t seed, std::uint64_t stream) {
  return Rng(derive_seed(seed, stream));
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform_open() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

cplx Rng::cnormal(double var) {
  const double s = std::sqrt(var / 2.0);
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw ConfigError("Rng::below: zero bound");
  // Rejection to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % bound;
}

ComplexTensor Rng::normal_tensor(const Shape& shape, double var) {
  ComplexTensor t(shape);
  for (cplx& v : t.data) v = cnormal(var);
  return t;
}

std::vector<std::uint32_t> sample_without_replacement(Rng& rng, std::uint32_t n, std::uint32_t k) {
  if (k > n) throw ConfigError("sample_without_replacement: k > n");
  std::vector<std::uint32_t> pool(n);
  for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
  // Partial Fisher-Yates.
  for (std::uint32_t i = 0; i < k; ++i) {
    const std::uint32_t j = i + static_cast<std::uint32_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

std::vector<std::uint32_t> weighted_sample_without_replacement(Rng& rng,
                                                               const std::vector<double>& weights,
                                                               std::uint32_t k) {
  const std::uint32_t n = static_cast<std::uint32_t>(weights.size());
  if (k > n) throw ConfigError("weighted_sample_without_replacement: k > n");
  std::vector<double> w = weights;
  double total = 0.0;
  std::uint32_t positive = 0;
  for (double x : w) {
    if (x < 0.0) throw ConfigError("weighted_sample_without_replacement: negative weight");
    if (x > 0.0) ++positive;
    total += x;
  }
  if (positive < k) throw ConfigError("weighted_sample_without_replacement: too few positive weights");
  std::vector<std::uint32_t> out;
  out.reserve(k);
  for (std::uint32_t draw = 0; draw < k; ++draw) {
    const double u = rng.uniform() * total;
    double acc = 0.0;
    std::uint32_t pick = n;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (w[i] <= 0.0) continue;
      acc += w[i];
      if (u < acc) {
        pick = i;
        break;
      }
    }
    if (pick == n) {  // numerical tail: take the last positive entry
      for (std::uint32_t i = n; i-- > 0;)
        if (w[i] > 0.0) {
          pick = i;
          break;
        }
    }
    out.push_back(pick);
    total -= w[pick];
    w[pick] = 0.0;
  }
  return out;
}

}  // namespace pnpmri
