#include "pnpmri/forward_model.hpp"

#include <cmath>

#include "pnpmri/errors.hpp"
#include "pnpmri/rng.hpp"

namespace pnpmri {

ForwardModel::ForwardModel(SamplingPattern pattern, CoilMaps coils, double sigma2, ExecPolicy exec)
    : pattern_(std::move(pattern)),
      coils_(std::move(coils)),
      sigma2_(sigma2),
      exec_(exec),
      fft_(pattern_.nx, pattern_.ny) {
  pattern_.validate();
  coils_.validate();
  if (coils_.nx != pattern_.nx || coils_.ny != pattern_.ny)
    throw ShapeError("ForwardModel: coil map grid does not match sampling grid");
  if (!(sigma2_ > 0.0)) throw ConfigError("ForwardModel: sigma2 must be positive");
}

// One (frame, coil) block: frame/scratch are caller-provided thread-local
// buffers of nx*ny and max(nx,ny) entries.
void ForwardModel::forward_block(const ComplexTensor& x, ComplexTensor& y, std::size_t t,
                                 std::size_t i, cplx* frame, cplx* scratch) const {
  const std::size_t nx = pattern_.nx, ny = pattern_.ny, nt = pattern_.nt;
  const cplx* s = coils_.coil(i);
  for (std::size_t p = 0; p < nx * ny; ++p) frame[p] = s[p] * x.data[p * nt + t];
  fft_.transform(frame, /*inverse=*/false, scratch);
  const auto& lines = pattern_.frames[t];
  const std::size_t M = pattern_.samples_per_frame();
  for (std::size_t j = 0; j < lines.size(); ++j) {
    const std::size_t ky = lines[j];
    for (std::size_t kx = 0; kx < nx; ++kx)
      y.data[(i * M + j * nx + kx) * nt + t] = frame[kx * ny + ky];
  }
}

ComplexTensor ForwardModel::apply(const ComplexTensor& x) const {
  if (x.shape != image_shape())
    throw ShapeError("ForwardModel::apply: expected image " + shape_str(image_shape()) + ", got " +
                     shape_str(x.shape));
  const std::size_t nx = pattern_.nx, ny = pattern_.ny, nt = pattern_.nt, C = coils_.C;
  ComplexTensor y(kspace_shape());
  const std::ptrdiff_t blocks = static_cast<std::ptrdiff_t>(nt * C);
  if (exec_ == ExecPolicy::parallel) {
#pragma omp parallel
    {
      std::vector<cplx> frame(nx * ny), scratch(std::max(nx, ny));
#pragma omp for schedule(static)
      for (std::ptrdiff_t b = 0; b < blocks; ++b)
        forward_block(x, y, std::size_t(b) / C, std::size_t(b) % C, frame.data(), scratch.data());
    }
  } else {
    std::vector<cplx> frame(nx * ny), scratch(std::max(nx, ny));
    for (std::ptrdiff_t b = 0; b < blocks; ++b)
      forward_block(x, y, std::size_t(b) / C, std::size_t(b) % C, frame.data(), scratch.data());
  }
  return y;
}

// Adjoint of one frame: scatter sampled lines, inverse DFT, weight by the
// conjugate coil profile, accumulate over coils in index order.
void ForwardModel::adjoint_frame(const ComplexTensor& y, ComplexTensor& x, std::size_t t,
                                 cplx* frame, cplx* scratch) const {
  const std::size_t nx = pattern_.nx, ny = pattern_.ny, nt = pattern_.nt, C = coils_.C;
  const auto& lines = pattern_.frames[t];
  const std::size_t M = pattern_.samples_per_frame();
  for (std::size_t p = 0; p < nx * ny; ++p) x.data[p * nt + t] = 0.0;
  for (std::size_t i = 0; i < C; ++i) {
    std::fill(frame, frame + nx * ny, cplx(0.0, 0.0));
    for (std::size_t j = 0; j < lines.size(); ++j) {
      const std::size_t ky = lines[j];
      for (std::size_t kx = 0; kx < nx; ++kx)
        frame[kx * ny + ky] = y.data[(i * M + j * nx + kx) * nt + t];
    }
    fft_.transform(frame, /*inverse=*/true, scratch);
    const cplx* s = coils_.coil(i);
    for (std::size_t p = 0; p < nx * ny; ++p)
      x.data[p * nt + t] += std::conj(s[p]) * frame[p];
  }
}

ComplexTensor ForwardModel::apply_adjoint(const ComplexTensor& y) const {
  if (y.shape != kspace_shape())
    throw ShapeError("ForwardModel::apply_adjoint: expected k-space " + shape_str(kspace_shape()) +
                     ", got " + shape_str(y.shape));
  const std::size_t nx = pattern_.nx, ny = pattern_.ny, nt = pattern_.nt;
  ComplexTensor x(image_shape());
  if (exec_ == ExecPolicy::parallel) {
#pragma omp parallel
    {
      std::vector<cplx> frame(nx * ny), scratch(std::max(nx, ny));
#pragma omp for schedule(static)
      for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(nt); ++t)
        adjoint_frame(y, x, std::size_t(t), frame.data(), scratch.data());
    }
  } else {
    std::vector<cplx> frame(nx * ny), scratch(std::max(nx, ny));
    for (std::size_t t = 0; t < nt; ++t) adjoint_frame(y, x, t, frame.data(), scratch.data());
  }
  return x;
}

ComplexTensor ForwardModel::grad_data(const ComplexTensor& x, const ComplexTensor& y) const {
  ComplexTensor r = apply(x);
  r -= y;
  ComplexTensor g = apply_adjoint(r);
  scale(g, 1.0 / sigma2_);
  return g;
}

double ForwardModel::data_fidelity(const ComplexTensor& x, const ComplexTensor& y) const {
  ComplexTensor r = apply(x);
  r -= y;
  return 0.5 / sigma2_ * norm2(r);
}

double ForwardModel::operator_norm(int iters, std::uint64_t seed) const {
  if (iters < 1) throw ConfigError("operator_norm: iters must be >= 1");
  Rng rng(seed);
  ComplexTensor v = rng.normal_tensor(image_shape());
  double nv = norm(v);
  if (nv == 0.0) throw NumericError("operator_norm: degenerate start vector");
  scale(v, 1.0 / nv);
  double rayleigh = 0.0;
  for (int k = 0; k < iters; ++k) {
    ComplexTensor w = apply_adjoint(apply(v));
    rayleigh = std::real(dot(v, w));  // Rayleigh quotient of A^H A, nondecreasing
    const double nw = norm(w);
    if (nw == 0.0) break;  // v in the null space; estimate stays at current value
    scale(w, 1.0 / nw);
    v = std::move(w);
  }
  return std::sqrt(std::max(rayleigh, 0.0));
}

double ForwardModel::op_norm() const {
  std::call_once(norm_once_, [this] { cached_norm_ = operator_norm(64, 0x5eed5eedULL); });
  return cached_norm_;
}

}  // namespace pnpmri
