#include "pnpmri/fft.hpp"

#include <cmath>

#include "pnpmri/errors.hpp"

namespace pnpmri {

namespace {
bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}  // namespace

Fft1D::Fft1D(std::size_t n) : n_(n), pow2_(is_pow2(n)), unit_(1.0 / std::sqrt(double(n))) {
  if (n == 0) throw ConfigError("Fft1D: zero length");
  twiddle_.resize(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    const double a = -2.0 * M_PI * double(k) / double(n_);
    twiddle_[k] = cplx(std::cos(a), std::sin(a));
  }
  if (pow2_) {
    bitrev_.resize(n_);
    std::size_t bits = 0;
    while ((std::size_t(1) << bits) < n_) ++bits;
    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b)
        if (i & (std::size_t(1) << b)) r |= std::size_t(1) << (bits - 1 - b);
      bitrev_[i] = r;
    }
  }
}

void Fft1D::radix2(cplx* x, bool inverse) const {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j = bitrev_[i];
    if (j > i) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t step = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        cplx w = twiddle_[k * step];
        if (inverse) w = std::conj(w);
        const cplx a = x[start + k];
        const cplx b = x[start + k + half] * w;
        x[start + k] = a + b;
        x[start + k + half] = a - b;
      }
    }
  }
  for (std::size_t i = 0; i < n_; ++i) x[i] *= unit_;
}

void Fft1D::direct(cplx* x, bool inverse) const {
  std::vector<cplx> out(n_, cplx(0.0, 0.0));
  for (std::size_t j = 0; j < n_; ++j) {
    const cplx xj = x[j];
    for (std::size_t k = 0; k < n_; ++k) {
      cplx w = twiddle_[(j * k) % n_];
      if (inverse) w = std::conj(w);
      out[k] += xj * w;
    }
  }
  for (std::size_t k = 0; k < n_; ++k) x[k] = out[k] * unit_;
}

void Fft1D::transform(cplx* x, bool inverse) const {
  if (n_ == 1) return;  // unitary 1-point transform is the identity
  if (pow2_)
    radix2(x, inverse);
  else
    direct(x, inverse);
}

Fft2D::Fft2D(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

void Fft2D::transform(cplx* frame, bool inverse, cplx* scratch) const {
  const std::size_t nr = rows_.size();
  const std::size_t nc = cols_.size();
  for (std::size_t r = 0; r < nr; ++r) cols_.transform(frame + r * nc, inverse);
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t r = 0; r < nr; ++r) scratch[r] = frame[r * nc + c];
    rows_.transform(scratch, inverse);
    for (std::size_t r = 0; r < nr; ++r) frame[r * nc + c] = scratch[r];
  }
}

}  // namespace pnpmri
