#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pnpmri/denoisers.hpp"
#include "pnpmri/prox.hpp"
#include "pnpmri/tensor.hpp"

namespace pnpmri {

/// Consensus state: the pair (x, u) at which the data-fitting map h and the
/// denoiser f are tested for agreement. Stacked view z = [z1; z2] with
/// z1 = x - u (the data agent input) and z2 = x + u (the denoiser input).
struct CEState {
  ComplexTensor x;
  ComplexTensor u;

  CEState() = default;
  CEState(ComplexTensor x_, ComplexTensor u_);

  ComplexTensor z1() const { return x - u; }
  ComplexTensor z2() const { return x + u; }
  static CEState from_stacked(const ComplexTensor& z1, const ComplexTensor& z2);
};

/// Residual pair of the prox-based consensus conditions:
///   r_h = |x - h(x - u; eta)|,  r_f = |x - f(x + u)|.
/// h is evaluated with `inner`; both vanish exactly at an equilibrium.
std::pair<double, double> ce_residual_pnp(const CEState& state, const ComplexTensor& y,
                                          const ForwardModel& A, const Denoiser& f, double eta,
                                          double sigma2, const InnerSpec& inner);

/// The correction that solves the data-agent condition identically:
/// u = (eta/sigma2) A^H (y - A x).
ComplexTensor ce_u_formula(const ComplexTensor& xhat, const ComplexTensor& y,
                           const ForwardModel& A, double eta, double sigma2);

/// Balance residual of the denoising-regularized equilibrium:
/// |(L eta / sigma2) A^H (A x - y) - (f(x) - x)|.
double ce_residual_red(const ComplexTensor& xhat, const ComplexTensor& y, const ForwardModel& A,
                       const Denoiser& f, double eta, double sigma2, double L);

struct MannResult {
  CEState state;
  std::vector<double> step_norms;  // |z_{k+1} - z_k| per iteration
};

/// Mann iteration on the stacked reflection system
///   z <- (1-gamma) z + gamma (2G - I)(2F - I) z,
/// F = [h(z1; eta); f(z2)], G = consensus averaging. gamma in (0,1).
/// Returns the CE state recovered from the stacked fixed point; when f is
/// nonexpansive the step norms are nonincreasing.
MannResult mann_solve(const ComplexTensor& y, const ForwardModel& A, const Denoiser& f, double eta,
                      double sigma2, double gamma, int iters, const InnerSpec& inner,
                      const std::optional<CEState>& z0 = std::nullopt);

/// Relative discrepancy between the central-difference gradient of ln p~ and
/// the denoiser-residual form (f_mmse(z) - z)/eta, at step `delta`.
double tweedie_check(const TrainingSet& ts, const std::vector<double>& z, double delta);

using RealDenoiserFn = std::function<std::vector<double>(const std::vector<double>&)>;

struct ScoreMatchGap {
  double gap = 0.0;     // Monte-Carlo mean of |score(z) - (f(z)-z)/eta|^2
  double stderr_ = 0.0; // standard error of the mean
  int samples = 0;
};

/// Monte-Carlo score-matching gap of a candidate denoiser over z = x_t + noise,
/// x_t uniform over the training set, noise ~ N(0, eta I).
ScoreMatchGap score_match_gap(const TrainingSet& ts, const RealDenoiserFn& f, int samples,
                              std::uint64_t seed);

}  // namespace pnpmri
