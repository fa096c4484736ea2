#pragma once

#include <cstddef>
#include <vector>

#include "pnpmri/tensor.hpp"

namespace pnpmri {

/// Unitary 1-D DFT plan (1/sqrt(n) scaling both directions). Radix-2 for
/// powers of two, direct evaluation otherwise. Immutable after construction;
/// transform() is safe to call concurrently on distinct buffers.
class Fft1D {
 public:
  explicit Fft1D(std::size_t n);

  std::size_t size() const { return n_; }

  /// In-place transform of x[0..n). inverse=false applies exp(-2*pi*i*jk/n).
  void transform(cplx* x, bool inverse) const;

 private:
  std::size_t n_;
  bool pow2_;
  std::vector<std::size_t> bitrev_;
  std::vector<cplx> twiddle_;  // exp(-2*pi*i*k/n), k in [0, n)
  double unit_;                // 1/sqrt(n)

  void radix2(cplx* x, bool inverse) const;
  void direct(cplx* x, bool inverse) const;
};

/// Unitary 2-D DFT over a contiguous row-major [rows, cols] frame.
class Fft2D {
 public:
  Fft2D(std::size_t rows, std::size_t cols);

  /// In-place; `scratch` must hold max(rows, cols) entries.
  void transform(cplx* frame, bool inverse, cplx* scratch) const;

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_.size(); }

 private:
  Fft1D rows_;
  Fft1D cols_;
};

}  // namespace pnpmri
