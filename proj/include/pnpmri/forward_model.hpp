#pragma once

#include <cstdint>
#include <memory>
#include <mutex>

#include "pnpmri/exec.hpp"
#include "pnpmri/fft.hpp"
#include "pnpmri/sampling.hpp"
#include "pnpmri/tensor.hpp"

namespace pnpmri {

/// Block-diagonal acquisition operator: per frame t and coil i, multiply by
/// the coil profile, apply the unitary 2-D DFT, keep the sampled lines.
/// Unitary DFT + sum-of-squares coils + selection rows give |A|_2 <= 1.
///
/// Images are [nx, ny, nt]; measurements are [C, M, nt] with M = lines*nx,
/// ordered line-major (sorted line index, then kx) within a frame.
///
/// Immutable after construction; apply/apply_adjoint are safe to call
/// concurrently. Internal parallelism follows the ExecPolicy with a fixed
/// coil summation order, so results do not depend on the thread count.
class ForwardModel {
 public:
  ForwardModel(SamplingPattern pattern, CoilMaps coils, double sigma2,
               ExecPolicy exec = default_exec());

  const SamplingPattern& pattern() const { return pattern_; }
  const CoilMaps& coils() const { return coils_; }
  double sigma2() const { return sigma2_; }
  ExecPolicy exec() const { return exec_; }

  std::size_t nx() const { return pattern_.nx; }
  std::size_t ny() const { return pattern_.ny; }
  std::size_t nt() const { return pattern_.nt; }
  std::size_t ncoils() const { return coils_.C; }
  std::size_t image_numel() const { return nx() * ny() * nt(); }

  Shape image_shape() const { return {nx(), ny(), nt()}; }
  Shape kspace_shape() const { return {ncoils(), pattern_.samples_per_frame(), nt()}; }

  ComplexTensor apply(const ComplexTensor& x) const;
  ComplexTensor apply_adjoint(const ComplexTensor& y) const;

  /// (1/sigma2) A^H (A x - y); zero when A x = y.
  ComplexTensor grad_data(const ComplexTensor& x, const ComplexTensor& y) const;

  /// 0.5/sigma2 * |y - A x|^2, the data-fidelity value traced by solvers.
  double data_fidelity(const ComplexTensor& x, const ComplexTensor& y) const;

  /// Power-iteration estimate of |A|_2 (nondecreasing in iters).
  double operator_norm(int iters, std::uint64_t seed) const;

  /// Cached operator_norm(64, fixed seed); used for stepsize bounds.
  double op_norm() const;

 private:
  SamplingPattern pattern_;
  CoilMaps coils_;
  double sigma2_;
  ExecPolicy exec_;
  Fft2D fft_;

  mutable std::once_flag norm_once_;
  mutable double cached_norm_ = 0.0;

  void forward_block(const ComplexTensor& x, ComplexTensor& y, std::size_t t, std::size_t i,
                     cplx* frame, cplx* scratch) const;
  void adjoint_frame(const ComplexTensor& y, ComplexTensor& x, std::size_t t, cplx* frame,
                     cplx* scratch) const;
};

}  // namespace pnpmri
