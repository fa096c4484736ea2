#include "oracles.hpp"

#include <cmath>

#include "pnpmri/denoisers.hpp"
#include "pnpmri/rng.hpp"
#include "pnpmri/transforms.hpp"

namespace oracles {

using namespace pnpmri;

Eigen::VectorXcd to_eigen(const ComplexTensor& t) {
  Eigen::VectorXcd v(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) v(i) = t.data[i];
  return v;
}

ComplexTensor from_eigen(const Eigen::VectorXcd& v, const Shape& shape) {
  ComplexTensor t(shape);
  for (std::size_t i = 0; i < t.size(); ++i) t.data[i] = v(i);
  return t;
}

Eigen::MatrixXcd dense_matrix(const std::function<ComplexTensor(const ComplexTensor&)>& op,
                              const Shape& input_shape, std::size_t output_numel) {
  const std::size_t n = shape_numel(input_shape);
  Eigen::MatrixXcd M(output_numel, n);
  ComplexTensor e(input_shape);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.data.begin(), e.data.end(), cplx(0, 0));
    e.data[j] = 1.0;
    const ComplexTensor col = op(e);
    if (col.size() != output_numel) throw ShapeError("dense_matrix: output size changed");
    for (std::size_t i = 0; i < output_numel; ++i) M(i, j) = col.data[i];
  }
  return M;
}

Eigen::MatrixXcd dense_forward(const ForwardModel& model) {
  return dense_matrix([&](const ComplexTensor& x) { return model.apply(x); },
                      model.image_shape(), shape_numel(model.kspace_shape()));
}

ComplexTensor least_squares_dense(const ForwardModel& model, const ComplexTensor& y) {
  const Eigen::MatrixXcd A = dense_forward(model);
  const Eigen::VectorXcd x =
      A.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(to_eigen(y));
  return from_eigen(x, model.image_shape());
}

ComplexTensor random_tensor(const Shape& shape, std::uint64_t seed) {
  Rng rng(seed);
  return rng.normal_tensor(shape);
}

ForwardModel make_test_model(std::size_t nx, std::size_t ny, std::size_t nt, std::size_t coils,
                             double R, double sigma2, std::uint64_t seed, std::size_t acs_lines) {
  const CoilMaps cm = make_coilmaps(nx, ny, coils, derive_seed(seed, 1));
  const SamplingPattern sp = make_sampling(nx, ny, nt, R, SamplingScheme::variable_density, 2.0,
                                           acs_lines, derive_seed(seed, 2));
  return ForwardModel(sp, cm, sigma2);
}

double l1_objective(const ForwardModel& model, const ComplexTensor& y, double lambda, int levels,
                    const ComplexTensor& x) {
  const ComplexTensor coeffs = haar_forward(x, levels);
  double l1 = 0.0;
  for (const cplx& c : coeffs.data) l1 += std::abs(c);
  return model.data_fidelity(x, y) + lambda * l1;
}

MfistaResult mfista_l1(const ForwardModel& model, const ComplexTensor& y, double lambda,
                       int levels, int iters) {
  const double an = model.op_norm();
  const double step = 0.99 * model.sigma2() / (an * an);
  const TdtDenoiser prox(TdtDenoiser::Transform::orth_haar, lambda * step, levels);

  ComplexTensor x = model.apply_adjoint(y);
  double fx = l1_objective(model, y, lambda, levels, x);
  ComplexTensor s = x;
  double q = 1.0;

  for (int k = 0; k < iters; ++k) {
    ComplexTensor g = model.apply_adjoint(model.apply(s) - y);
    scale(g, step / model.sigma2());
    const ComplexTensor z = prox.apply(s - g);
    const double fz = l1_objective(model, y, lambda, levels, z);
    const double q_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * q * q));
    ComplexTensor x_next = fz <= fx ? z : x;  // monotone choice
    s = lincomb(1.0, x_next, q / q_next, z - x_next);
    axpy((q - 1.0) / q_next, x_next - x, s);
    x = std::move(x_next);
    fx = std::min(fx, fz);
    q = q_next;
  }
  return {std::move(x), fx};
}

double prox_l1_subgrad_residual(const ComplexTensor& z, const ComplexTensor& xstar, double lambda,
                                double eta, int levels) {
  const ComplexTensor alpha = haar_forward(xstar, levels);
  const ComplexTensor beta = haar_forward(z, levels);
  const double tau = lambda * eta;
  double scale = 0.0;
  for (const cplx& b : beta.data) scale = std::max(scale, std::abs(b));
  const double tiny = 1e-10 * std::max(1.0, scale);  // rounding dead zone
  double worst = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const cplx a = alpha.data[i];
    const cplx b = beta.data[i];
    if (std::abs(a) > tiny) {
      // stationarity: a - b + tau * a/|a| = 0
      const cplx r = a - b + tau * a / std::abs(a);
      worst = std::max(worst, std::abs(r));
    } else {
      // subdifferential: |b| <= tau
      worst = std::max(worst, std::max(0.0, std::abs(b) - tau));
    }
  }
  return worst;
}

namespace {
double normal_pdf(double a) { return std::exp(-0.5 * a * a) / std::sqrt(2.0 * M_PI); }
double normal_tail(double a) { return 0.5 * std::erfc(a / std::sqrt(2.0)); }

// E[(Z - a)^2 1{Z > a}] for standard normal Z.
double clipped_sq(double a) { return (1.0 + a * a) * normal_tail(a) - a * normal_pdf(a); }
}  // namespace

double bg_soft_mse(double rho, double eta, double c) {
  const double tau = c * std::sqrt(eta);
  // inactive component: x = 0, z ~ N(0, eta)
  const double b = tau / std::sqrt(eta);
  const double inactive = 2.0 * eta * clipped_sq(b);
  // active component: x ~ N(0,1), z ~ N(0, 1 + eta)
  const double w = 1.0 + eta;
  const double a = tau / std::sqrt(w);
  const double e_soft2 = 2.0 * w * clipped_sq(a);
  const double e_soft_z = 2.0 * w * normal_tail(a);
  const double active = e_soft2 - 2.0 / w * e_soft_z + 1.0;
  return rho * active + (1.0 - rho) * inactive;
}

std::vector<double> se_closed_form(double rho, double c, double sigma2, int M, int N, int iters) {
  const double delta = double(N) / double(M);
  std::vector<double> eta;
  eta.push_back(sigma2 + delta * rho);
  for (int k = 1; k < iters; ++k) eta.push_back(sigma2 + delta * bg_soft_mse(rho, eta.back(), c));
  return eta;
}

}  // namespace oracles
