#include "pnpmri/denoisers.hpp"

#include <cmath>
#include <limits>

#include "pnpmri/errors.hpp"

namespace pnpmri {

cplx soft_thresh(cplx u, double tau) {
  const double a = std::abs(u);
  if (a <= tau) return {0.0, 0.0};
  return u * ((a - tau) / a);
}

ComplexTensor soft_thresh(const ComplexTensor& u, double tau) {
  if (tau < 0.0) throw ConfigError("soft_thresh: negative threshold");
  ComplexTensor out(u.shape);
  for (std::size_t i = 0; i < u.size(); ++i) out.data[i] = soft_thresh(u.data[i], tau);
  return out;
}

// --- transform-domain thresholding ------------------------------------------

TdtDenoiser::TdtDenoiser(Transform transform, double tau, int levels, ExecPolicy exec)
    : transform_(transform), tau_(tau), levels_(levels), exec_(exec) {
  if (tau < 0.0) throw ConfigError("TdtDenoiser: negative threshold");
  if (levels < 1) throw ConfigError("TdtDenoiser: levels must be >= 1");
}

ComplexTensor TdtDenoiser::apply(const ComplexTensor& z) const {
  if (transform_ == Transform::orth_haar)
    return haar_inverse(soft_thresh(haar_forward(z, levels_), tau_), levels_);
  return uwt_synthesize(soft_thresh(uwt_analyze(z, levels_, exec_), tau_), levels_, exec_);
}

std::string TdtDenoiser::name() const {
  return transform_ == Transform::orth_haar ? "tdt_orth" : "tdt_uwt";
}

// --- symmetric linear smoother ----------------------------------------------

LinearSymmetricDenoiser::LinearSymmetricDenoiser(std::vector<double> kernel, Shape shape,
                                                 double gain)
    : kernel_(std::move(kernel)), shape_(std::move(shape)), gain_(gain) {
  if (kernel_.empty() || kernel_.size() % 2 == 0)
    throw ConfigError("LinearSymmetricDenoiser: kernel must have odd length");
  for (std::size_t i = 0; i < kernel_.size(); ++i)
    if (kernel_[i] != kernel_[kernel_.size() - 1 - i])
      throw ConfigError("LinearSymmetricDenoiser: kernel taps must be symmetric");
  if (!(gain_ > 0.0)) throw ConfigError("LinearSymmetricDenoiser: gain must be positive");
  const std::size_t half = kernel_.size() / 2;

  // Eigenvalues of a symmetric circulant: c0 + 2 sum_j c_j cos(2 pi j w / n).
  double min_axis_prod = 1.0, max_axis_prod = 1.0;
  for (std::size_t d : shape_) {
    if (d <= 1) continue;
    if (d < kernel_.size())
      throw ConfigError("LinearSymmetricDenoiser: axis shorter than kernel");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t w = 0; w < d; ++w) {
      double lam = kernel_[half];
      for (std::size_t j = 1; j <= half; ++j)
        lam += 2.0 * kernel_[half + j] * std::cos(2.0 * M_PI * double(j * w) / double(d));
      lo = std::min(lo, lam);
      hi = std::max(hi, lam);
    }
    if (lo <= 0.0)
      throw ConfigError("LinearSymmetricDenoiser: kernel spectrum not positive (min " +
                        std::to_string(lo) + ")");
    min_axis_prod *= lo;
    max_axis_prod *= hi;
  }
  min_eig_ = gain_ * min_axis_prod;
  max_eig_ = gain_ * max_axis_prod;
}

ComplexTensor LinearSymmetricDenoiser::apply(const ComplexTensor& z) const {
  if (z.shape != shape_)
    throw ShapeError("LinearSymmetricDenoiser: bound to shape " + shape_str(shape_) + ", got " +
                     shape_str(z.shape));
  ComplexTensor cur = z;
  const std::size_t half = kernel_.size() / 2;
  for (std::size_t axis = 0; axis < shape_.size(); ++axis) {
    const std::size_t n = shape_[axis];
    if (n <= 1) continue;
    std::size_t stride = 1;
    for (std::size_t a = axis + 1; a < shape_.size(); ++a) stride *= shape_[a];
    const std::size_t chunk = n * stride;
    ComplexTensor next(shape_);
    for (std::size_t base = 0; base < cur.size(); base += chunk) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < stride; ++i) {
          cplx acc = 0.0;
          for (std::size_t k = 0; k < kernel_.size(); ++k) {
            const std::size_t jj = (j + n + k - half) % n;
            acc += kernel_[k] * cur.data[base + jj * stride + i];
          }
          next.data[base + j * stride + i] = acc;
        }
      }
    }
    cur = std::move(next);
  }
  scale(cur, gain_);
  return cur;
}

// --- exact MMSE under the KDE prior ------------------------------------------

MmseKdeDenoiser::MmseKdeDenoiser(TrainingSet ts) : ts_(std::move(ts)) { ts_.validate(); }

ComplexTensor MmseKdeDenoiser::apply(const ComplexTensor& z) const {
  const std::vector<double> zr = to_real_pairs(z);
  if (zr.size() != ts_.dim())
    throw ShapeError("MmseKdeDenoiser: training points have dimension " +
                     std::to_string(ts_.dim()) + ", input maps to " + std::to_string(zr.size()));
  return from_real_pairs(kde_posterior_mean(ts_, zr), z.shape);
}

// --- property probes ----------------------------------------------------------

double probe_jacobian_symmetry(const Denoiser& f, const ComplexTensor& z, double eps) {
  if (eps <= 0.0) throw ConfigError("probe_jacobian_symmetry: eps must be positive");
  const std::size_t n = 2 * z.size();
  std::vector<double> z0 = to_real_pairs(z);
  std::vector<std::vector<double>> jac(n, std::vector<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> zp = z0, zm = z0;
    zp[j] += eps;
    zm[j] -= eps;
    const std::vector<double> fp = to_real_pairs(f.apply(from_real_pairs(zp, z.shape)));
    const std::vector<double> fm = to_real_pairs(f.apply(from_real_pairs(zm, z.shape)));
    for (std::size_t i = 0; i < n; ++i) jac[i][j] = (fp[i] - fm[i]) / (2.0 * eps);
  }
  double asym2 = 0.0, total2 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double d = jac[i][j] - jac[j][i];
      asym2 += d * d;
      total2 += jac[i][j] * jac[i][j];
    }
  if (total2 == 0.0) return 0.0;
  return std::sqrt(asym2) / std::sqrt(total2);
}

double probe_local_homogeneity(const Denoiser& f, const ComplexTensor& z, double eps) {
  const ComplexTensor fz = f.apply(z);
  const double base = norm(fz);
  if (base == 0.0) return std::numeric_limits<double>::infinity();
  const ComplexTensor scaled = f.apply((1.0 + eps) * z);
  return norm(lincomb(1.0 + eps, fz, -1.0, scaled)) / base;
}

}  // namespace pnpmri
