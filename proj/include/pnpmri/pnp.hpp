#pragma once

#include <string>
#include <vector>

#include "pnpmri/denoisers.hpp"
#include "pnpmri/prox.hpp"
#include "pnpmri/trace.hpp"

namespace pnpmri {

enum class PnPAlgo { admm, fista, pds, bfista };
enum class InitKind { zero, adjoint, given };

/// Shared configuration for the prox-based PnP family. eta and sigma2 are
/// algorithm parameters (sigma2 need not equal the model's noise level).
/// Constraints checked at solver entry:
///   fista/bfista: eta < sigma2 / |A|^2 (gradient stepsize bound)
///   pds:          gamma in (0,1) and gamma <= eta / (eta + sigma2 / |A|^2);
///                 gamma = 0 selects that boundary value.
struct PnPConfig {
  PnPAlgo algo = PnPAlgo::admm;
  double eta = 1.0;
  double sigma2 = 1.0;
  double gamma = 0.0;
  double lambda = 0.0;  // bfista: UWT threshold
  int uwt_levels = 1;   // bfista
  int max_iters = 100;
  InnerSpec inner = InnerSpec::cg(4);
  InitKind init = InitKind::adjoint;
  ComplexTensor init_tensor;

  const ComplexTensor* reference = nullptr;  // enables the nmse_db column
  bool trace_ce = true;
  /// Relative-change early stop; 0 keeps the plain iteration budget so traces
  /// stay comparable across configurations.
  double rel_change_stop = 0.0;
};

struct PnPResult {
  ComplexTensor xhat;
  ComplexTensor uhat;
  SolverTrace trace;
  std::vector<std::string> warnings;
};

// Traced consensus residuals: ADMM rows evaluate (r_h, r_f) at the solver's
// own (v_k, u_k); there r_f vanishes identically (v_k + u_k equals the
// denoiser input by the correction update) and r_h measures convergence.
// FISTA/PDS rows use the closed-form correction u = (eta/sigma2) A^H (y - A x),
// which zeroes the data-agent condition identically, so ce_res_h is exactly 0
// and ce_res_f is the single-equation fixed-point residual.

/// Splitting with the exact/inner-approximated data prox. Returns x = v_K and
/// the final correction u_K. init = given seeds v_0 with the tensor and
/// u_0 = (eta/sigma2) A^H (y - A v_0), which holds fixed points in place.
PnPResult pnp_admm(const ComplexTensor& y, const ForwardModel& A, const Denoiser& f,
                   const PnPConfig& cfg);

/// Gradient-step variant with Nesterov weights q_k = (1+sqrt(1+4 q_{k-1}^2))/2.
PnPResult pnp_fista(const ComplexTensor& y, const ForwardModel& A, const Denoiser& f,
                    const PnPConfig& cfg);

/// Primal-dual splitting; init = given seeds x_0 with the tensor and
/// v_0 = A x_0 - y (the dual that holds fixed points in place).
PnPResult pnp_pds(const ComplexTensor& y, const ForwardModel& A, const Denoiser& f,
                  const PnPConfig& cfg);

/// Balanced FISTA: pnp_fista with the tight-frame UWT thresholder at
/// threshold lambda. An alias with validation, not a separate loop.
PnPResult bfista(const ComplexTensor& y, const ForwardModel& A, const PnPConfig& cfg);

}  // namespace pnpmri
