#pragma once

#include <string>
#include <vector>

#include "pnpmri/denoisers.hpp"
#include "pnpmri/prox.hpp"
#include "pnpmri/trace.hpp"

namespace pnpmri {

enum class RedVariant { apg, gd, fp };
enum class RedInitKind { zero, adjoint, given };

/// Accelerated proximal-gradient solver family for the denoising-regularized
/// optimality condition
///   0 = (1/sigma2) A^H (A x - y) + (1/eta)(x - f(x)).
/// variant apg uses the exact/inner-approximated data prox at eta/L; variant
/// gd replaces that prox with one gradient step on the same subproblem taken
/// at the previous iterate (identical fixed points for every L); variant fp
/// forces L = 1 and unit momentum weights.
struct RedConfig {
  RedVariant variant = RedVariant::apg;
  double eta = 1.0;
  double sigma2 = 1.0;
  double L = 1.0;  // damping; >= 1 (the nonexpansive-f guarantee needs L > 1)
  int max_iters = 100;
  InnerSpec inner = InnerSpec::cg(4);
  RedInitKind init = RedInitKind::adjoint;
  ComplexTensor init_tensor;

  const ComplexTensor* reference = nullptr;
  bool trace_ce = true;
  double rel_change_stop = 0.0;
};

struct RedResult {
  ComplexTensor xhat;
  SolverTrace trace;
  std::vector<std::string> warnings;
  double final_residual_norm = 0.0;  // |(1/sigma2)A^H(Ax-y) + (1/eta)(x - f(x))| at xhat
};

/// The optimality residual and its Euclidean norm.
std::pair<ComplexTensor, double> red_residual(const ComplexTensor& x, const ComplexTensor& y,
                                              const ForwardModel& A, const Denoiser& f, double eta,
                                              double sigma2);

RedResult red_apg(const ComplexTensor& y, const ForwardModel& A, const Denoiser& f,
                  const RedConfig& cfg);
RedResult red_gd(const ComplexTensor& y, const ForwardModel& A, const Denoiser& f,
                 const RedConfig& cfg);

/// Dispatch on cfg.variant (fp runs through the apg loop with L=1, q_k = 1).
RedResult red_solve(const ComplexTensor& y, const ForwardModel& A, const Denoiser& f,
                    const RedConfig& cfg);

}  // namespace pnpmri
