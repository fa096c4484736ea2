#include "pnpmri/equilibrium.hpp"

#include <cmath>

#include "pnpmri/errors.hpp"
#include "pnpmri/rng.hpp"

namespace pnpmri {

CEState::CEState(ComplexTensor x_, ComplexTensor u_) : x(std::move(x_)), u(std::move(u_)) {
  require_same_shape(x, u, "CEState");
}

CEState CEState::from_stacked(const ComplexTensor& z1, const ComplexTensor& z2) {
  require_same_shape(z1, z2, "CEState::from_stacked");
  return CEState(lincomb(0.5, z1, 0.5, z2), lincomb(-0.5, z1, 0.5, z2));
}

std::pair<double, double> ce_residual_pnp(const CEState& state, const ComplexTensor& y,
                                          const ForwardModel& A, const Denoiser& f, double eta,
                                          double sigma2, const InnerSpec& inner) {
  DataProx h(A, eta, sigma2, inner);
  h.set_y(y);
  const double r_h = norm(state.x - h.apply(state.z1()));
  const double r_f = norm(state.x - f.apply(state.z2()));
  return {r_h, r_f};
}

ComplexTensor ce_u_formula(const ComplexTensor& xhat, const ComplexTensor& y,
                           const ForwardModel& A, double eta, double sigma2) {
  ComplexTensor r = A.apply(xhat);
  r = y - r;
  ComplexTensor u = A.apply_adjoint(r);
  scale(u, eta / sigma2);
  return u;
}

double ce_residual_red(const ComplexTensor& xhat, const ComplexTensor& y, const ForwardModel& A,
                       const Denoiser& f, double eta, double sigma2, double L) {
  ComplexTensor r = A.apply(xhat);
  r -= y;
  ComplexTensor lhs = A.apply_adjoint(r);
  scale(lhs, L * eta / sigma2);
  const ComplexTensor correction = f.apply(xhat) - xhat;
  return norm(lhs - correction);
}

MannResult mann_solve(const ComplexTensor& y, const ForwardModel& A, const Denoiser& f, double eta,
                      double sigma2, double gamma, int iters, const InnerSpec& inner,
                      const std::optional<CEState>& z0) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("mann_solve: gamma must lie in (0,1)");
  if (iters < 1) throw ConfigError("mann_solve: iters must be >= 1");
  f.set_eta(eta);

  DataProx h(A, eta, sigma2, inner);
  h.set_y(y);

  ComplexTensor z1, z2;
  if (z0) {
    z1 = z0->z1();
    z2 = z0->z2();
  } else {
    ComplexTensor x0 = A.apply_adjoint(y);
    z1 = x0;
    z2 = x0;
  }

  MannResult result;
  result.step_norms.reserve(iters);
  for (int k = 0; k < iters; ++k) {
    // w = (2F - I) z
    const ComplexTensor w1 = lincomb(2.0, h.apply(z1), -1.0, z1);
    const ComplexTensor w2 = lincomb(2.0, f.apply(z2), -1.0, z2);
    // v = (2G - I) w reflects across the consensus subspace
    const ComplexTensor mean = lincomb(0.5, w1, 0.5, w2);
    const ComplexTensor v1 = lincomb(2.0, mean, -1.0, w1);
    const ComplexTensor v2 = lincomb(2.0, mean, -1.0, w2);
    const ComplexTensor n1 = lincomb(1.0 - gamma, z1, gamma, v1);
    const ComplexTensor n2 = lincomb(1.0 - gamma, z2, gamma, v2);
    double step2 = norm2(n1 - z1) + norm2(n2 - z2);
    result.step_norms.push_back(std::sqrt(step2));
    z1 = n1;
    z2 = n2;
    if (!all_finite(z1) || !all_finite(z2))
      throw NumericError("mann_solve: non-finite iterate at iteration " + std::to_string(k));
  }
  result.state = CEState::from_stacked(z1, z2);
  return result;
}

double tweedie_check(const TrainingSet& ts, const std::vector<double>& z, double delta) {
  if (!(delta > 0.0)) throw ConfigError("tweedie_check: delta must be positive");
  ts.validate();
  if (z.size() != ts.dim()) throw ShapeError("tweedie_check: dimension mismatch");

  const std::vector<double> mean = kde_posterior_mean(ts, z);
  std::vector<double> residual_form(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) residual_form[i] = (mean[i] - z[i]) / ts.eta;

  double num2 = 0.0, den2 = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    std::vector<double> zp = z, zm = z;
    zp[i] += delta;
    zm[i] -= delta;
    const double g = (kde_log_density(ts, zp) - kde_log_density(ts, zm)) / (2.0 * delta);
    const double d = g - residual_form[i];
    num2 += d * d;
    den2 += residual_form[i] * residual_form[i];
  }
  if (den2 == 0.0) return std::sqrt(num2);
  return std::sqrt(num2 / den2);
}

ScoreMatchGap score_match_gap(const TrainingSet& ts, const RealDenoiserFn& f, int samples,
                              std::uint64_t seed) {
  if (samples < 1) throw ConfigError("score_match_gap: samples must be >= 1");
  ts.validate();
  const std::size_t n = ts.dim();
  Rng rng(seed);

  double sum = 0.0, sum2 = 0.0;
  for (int s = 0; s < samples; ++s) {
    const std::size_t t = static_cast<std::size_t>(rng.below(ts.count()));
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i)
      z[i] = ts.points[t][i] + std::sqrt(ts.eta) * rng.normal();
    const std::vector<double> score = kde_score(ts, z);
    const std::vector<double> fz = f(z);
    if (fz.size() != n) throw ShapeError("score_match_gap: candidate returned wrong dimension");
    double err2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = score[i] - (fz[i] - z[i]) / ts.eta;
      err2 += d * d;
    }
    sum += err2;
    sum2 += err2 * err2;
  }
  ScoreMatchGap out;
  out.samples = samples;
  out.gap = sum / samples;
  const double var = std::max(0.0, sum2 / samples - out.gap * out.gap);
  out.stderr_ = std::sqrt(var / samples);
  return out;
}

}  // namespace pnpmri
