#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "pnpmri/exec.hpp"
#include "pnpmri/kde.hpp"
#include "pnpmri/tensor.hpp"
#include "pnpmri/transforms.hpp"

namespace pnpmri {

/// soft-thresh(u; tau)_n = max{0, (|u_n| - tau)/|u_n|} u_n, with u_n = 0
/// mapping to 0. tau must be >= 0.
cplx soft_thresh(cplx u, double tau);
ComplexTensor soft_thresh(const ComplexTensor& u, double tau);

/// Pluggable denoiser f: shape-preserving map on complex tensors.
/// claims_nonexpansive is advisory metadata: solvers warn, never refuse.
class Denoiser {
 public:
  virtual ~Denoiser() = default;
  virtual ComplexTensor apply(const ComplexTensor& z) const = 0;
  virtual bool is_linear() const { return false; }
  virtual bool claims_nonexpansive() const { return false; }
  /// Solver-context hook (external denoisers export it as DENOISER_ETA).
  virtual void set_eta(double) const {}
  virtual std::string name() const = 0;
};

class IdentityDenoiser final : public Denoiser {
 public:
  ComplexTensor apply(const ComplexTensor& z) const override { return z; }
  bool is_linear() const override { return true; }
  bool claims_nonexpansive() const override { return true; }
  std::string name() const override { return "identity"; }
};

/// Transform-domain thresholding f(z) = Psi^H soft-thresh(Psi z; tau) with
/// Psi an orthonormal Haar DWT or the tight-frame undecimated Haar. With the
/// orthonormal transform this is the exact prox of lambda|Psi x|_1 at
/// tau = lambda*eta; with the UWT it is a plug-in denoiser, not a prox.
class TdtDenoiser final : public Denoiser {
 public:
  enum class Transform { orth_haar, uwt_haar };

  TdtDenoiser(Transform transform, double tau, int levels = 1, ExecPolicy exec = default_exec());

  ComplexTensor apply(const ComplexTensor& z) const override;
  bool claims_nonexpansive() const override { return true; }  // 1-Lipschitz in a tight frame
  std::string name() const override;

  Transform transform() const { return transform_; }
  double tau() const { return tau_; }

 private:
  Transform transform_;
  double tau_;
  int levels_;
  ExecPolicy exec_;
};

/// Symmetric positive-definite circulant smoother f(z) = W z, W = gain *
/// (separable circular convolution with a symmetric odd-length kernel on
/// every axis of extent > 1), applied identically to real and imaginary
/// parts. Spectrum is validated positive at construction for the bound shape;
/// nonexpansive when max eigenvalue <= 1.
class LinearSymmetricDenoiser final : public Denoiser {
 public:
  LinearSymmetricDenoiser(std::vector<double> kernel, Shape shape, double gain = 1.0);

  ComplexTensor apply(const ComplexTensor& z) const override;
  bool is_linear() const override { return true; }
  bool claims_nonexpansive() const override { return max_eig_ <= 1.0 + 1e-12; }
  std::string name() const override { return "linear_symmetric"; }

  double min_eig() const { return min_eig_; }
  double max_eig() const { return max_eig_; }
  const Shape& shape() const { return shape_; }

 private:
  std::vector<double> kernel_;
  Shape shape_;
  double gain_;
  double min_eig_ = 0.0, max_eig_ = 0.0;
};

/// Exact MMSE denoiser under the Gaussian-KDE prior: the posterior mean,
/// evaluated in the real-isomorphic space (log-sum-exp stabilized).
class MmseKdeDenoiser final : public Denoiser {
 public:
  explicit MmseKdeDenoiser(TrainingSet ts);

  ComplexTensor apply(const ComplexTensor& z) const override;
  std::string name() const override { return "mmse_kde"; }

  const TrainingSet& training_set() const { return ts_; }

 private:
  TrainingSet ts_;
};

/// Out-of-process denoiser speaking the pipe protocol: the child reads one
/// tensor (core format) from stdin, writes one tensor of identical shape to
/// stdout, and exits 0. DENOISER_ETA carries the solver's eta as decimal
/// text. Access to the child is serialized per instance.
class ExternalDenoiser final : public Denoiser {
 public:
  explicit ExternalDenoiser(std::string command);

  ComplexTensor apply(const ComplexTensor& z) const override;
  void set_eta(double eta) const override { eta_ = eta; }
  std::string name() const override { return "external"; }

 private:
  std::string command_;
  mutable double eta_ = 0.0;
  mutable std::unique_ptr<std::mutex> lock_;
};

/// Finite-difference Jacobian asymmetry |J - J^T|_F / |J|_F in the
/// real-isomorphic representation. Materializes a 2N x 2N Jacobian; small z only.
double probe_jacobian_symmetry(const Denoiser& f, const ComplexTensor& z, double eps);

/// |(1+eps) f(z) - f((1+eps) z)| / |f(z)|; +infinity sentinel when f(z) = 0.
double probe_local_homogeneity(const Denoiser& f, const ComplexTensor& z, double eps);

}  // namespace pnpmri
