#include "pnpmri/pnp.hpp"

#include <chrono>
#include <cmath>

#include "pnpmri/errors.hpp"
#include "pnpmri/metrics.hpp"

namespace pnpmri {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ComplexTensor initial_image(const ComplexTensor& y, const ForwardModel& A, const PnPConfig& cfg) {
  switch (cfg.init) {
    case InitKind::zero:
      return ComplexTensor(A.image_shape());
    case InitKind::adjoint:
      return A.apply_adjoint(y);
    case InitKind::given:
      if (cfg.init_tensor.shape != A.image_shape())
        throw ConfigError("pnp: init tensor has wrong shape");
      return cfg.init_tensor;
  }
  throw ConfigError("pnp: unknown init kind");
}

void common_checks(const ComplexTensor& y, const ForwardModel& A, const PnPConfig& cfg,
                   const Denoiser& f, std::vector<std::string>& warnings) {
  if (y.shape != A.kspace_shape()) throw ShapeError("pnp: y does not match the model's k-space");
  if (!(cfg.eta > 0.0)) throw ConfigError("pnp: eta must be positive");
  if (!(cfg.sigma2 > 0.0)) throw ConfigError("pnp: sigma2 must be positive");
  if (cfg.max_iters < 1) throw ConfigError("pnp: max_iters must be >= 1");
  if (!f.claims_nonexpansive())
    warnings.push_back("denoiser '" + f.name() +
                       "' does not claim nonexpansiveness; convergence is not certified");
  f.set_eta(cfg.eta);
}

double nmse_vs_reference(const PnPConfig& cfg, const ComplexTensor& x) {
  if (!cfg.reference) return std::nan("");
  return rsnr(*cfg.reference, x).nmse_db;
}

void check_iterate(const ComplexTensor& t, const char* algo, int iter) {
  if (!all_finite(t))
    throw NumericError(std::string(algo) + ": non-finite iterate at iteration " +
                       std::to_string(iter + 1));
}

bool rel_stop(const PnPConfig& cfg, const ComplexTensor& prev, const ComplexTensor& cur) {
  if (cfg.rel_change_stop <= 0.0) return false;
  const double denom = norm(prev);
  if (denom == 0.0) return false;
  return norm(cur - prev) / denom < cfg.rel_change_stop;
}

}  // namespace

PnPResult pnp_admm(const ComplexTensor& y, const ForwardModel& A, const Denoiser& f,
                   const PnPConfig& cfg) {
  PnPResult result;
  common_checks(y, A, cfg, f, result.warnings);

  DataProx h(A, cfg.eta, cfg.sigma2, cfg.inner);
  h.set_y(y);

  ComplexTensor v = initial_image(y, A, cfg);
  ComplexTensor u(A.image_shape());
  if (cfg.init == InitKind::given) {
    // Correction consistent with v0 being a fixed point of the recursion.
    ComplexTensor r = y - A.apply(v);
    u = A.apply_adjoint(r);
    scale(u, cfg.eta / cfg.sigma2);
  }

  const auto t0 = Clock::now();
  for (int k = 0; k < cfg.max_iters; ++k) {
    const ComplexTensor x = h.apply(v - u);
    if (cfg.trace_ce && k > 0)  // r_h of the previous row: h(v_{k-1} - u_{k-1}) = x
      result.trace.rows.back().ce_res_h = norm(v - x);
    const ComplexTensor v_prev = v;
    v = f.apply(x + u);
    u += x - v;
    check_iterate(v, "pnp_admm", k);
    check_iterate(u, "pnp_admm", k);

    SolverTraceRow row;
    row.iter = k + 1;
    row.nmse_db = nmse_vs_reference(cfg, v);
    ComplexTensor res = A.apply(v);
    res -= y;
    row.data_fidelity = 0.5 / cfg.sigma2 * norm2(res);
    if (cfg.trace_ce) row.ce_res_f = norm(v - f.apply(v + u));
    row.seconds = seconds_since(t0);
    result.trace.rows.push_back(row);

    if (rel_stop(cfg, v_prev, v)) break;
  }
  if (cfg.trace_ce && !result.trace.rows.empty())
    result.trace.rows.back().ce_res_h = norm(v - h.apply(v - u));

  result.xhat = std::move(v);
  result.uhat = std::move(u);
  return result;
}

namespace {

ComplexTensor ce_uhat_of(const ComplexTensor& x, const ComplexTensor& y, const ForwardModel& A,
                         const PnPConfig& cfg) {
  ComplexTensor r = y - A.apply(x);
  ComplexTensor u = A.apply_adjoint(r);
  scale(u, cfg.eta / cfg.sigma2);
  return u;
}

// Shared body for the gradient-based solvers' trace rows: at iterate x with
// the closed-form correction, ce_res_h vanishes identically (the correction
// is defined as the exact solution of the data-agent condition).
SolverTraceRow gradient_trace_row(const ComplexTensor& x, const ComplexTensor& y,
                                  const ForwardModel& A, const Denoiser& f, const PnPConfig& cfg,
                                  int iter, Clock::time_point t0) {
  SolverTraceRow row;
  row.iter = iter + 1;
  row.nmse_db = nmse_vs_reference(cfg, x);
  ComplexTensor res = A.apply(x);
  res -= y;
  row.data_fidelity = 0.5 / cfg.sigma2 * norm2(res);
  if (cfg.trace_ce) {
    ComplexTensor u = A.apply_adjoint(res);
    scale(u, -cfg.eta / cfg.sigma2);  // (eta/sigma2) A^H (y - A x)
    row.ce_res_h = 0.0;
    row.ce_res_f = norm(x - f.apply(x + u));
  }
  row.seconds = seconds_since(t0);
  return row;
}

}  // namespace

PnPResult pnp_fista(const ComplexTensor& y, const ForwardModel& A, const Denoiser& f,
                    const PnPConfig& cfg) {
  PnPResult result;
  common_checks(y, A, cfg, f, result.warnings);
  const double an = A.op_norm();
  if (!(cfg.eta < cfg.sigma2 / (an * an)))
    throw ConfigError("pnp_fista: stepsize bound violated: eta must be < sigma2/|A|^2 = " +
                      std::to_string(cfg.sigma2 / (an * an)));

  ComplexTensor x_prev = initial_image(y, A, cfg);
  ComplexTensor s = x_prev;
  double q_prev = 1.0;
  const double step = cfg.eta / cfg.sigma2;

  const auto t0 = Clock::now();
  for (int k = 0; k < cfg.max_iters; ++k) {
    ComplexTensor grad = A.apply(s);
    grad -= y;
    ComplexTensor z = s;
    axpy(-step, A.apply_adjoint(grad), z);
    ComplexTensor x = f.apply(z);
    check_iterate(x, "pnp_fista", k);

    const double q = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * q_prev * q_prev));
    s = lincomb(1.0 + (q_prev - 1.0) / q, x, -(q_prev - 1.0) / q, x_prev);
    q_prev = q;

    result.trace.rows.push_back(gradient_trace_row(x, y, A, f, cfg, k, t0));
    const bool stop = rel_stop(cfg, x_prev, x);
    x_prev = std::move(x);
    if (stop) break;
  }

  result.uhat = ce_uhat_of(x_prev, y, A, cfg);
  result.xhat = std::move(x_prev);
  return result;
}

PnPResult pnp_pds(const ComplexTensor& y, const ForwardModel& A, const Denoiser& f,
                  const PnPConfig& cfg) {
  PnPResult result;
  common_checks(y, A, cfg, f, result.warnings);
  const double an = A.op_norm();
  const double gamma_max = cfg.eta / (cfg.eta + cfg.sigma2 / (an * an));
  const double gamma = cfg.gamma == 0.0 ? gamma_max : cfg.gamma;
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("pnp_pds: gamma must lie in (0,1)");
  if (gamma > gamma_max + 1e-15)
    throw ConfigError("pnp_pds: gamma exceeds eta/(eta + sigma2/|A|^2) = " +
                      std::to_string(gamma_max));

  ComplexTensor x_prev = initial_image(y, A, cfg);
  ComplexTensor v = A.apply(x_prev);
  v -= y;

  const auto t0 = Clock::now();
  for (int k = 0; k < cfg.max_iters; ++k) {
    ComplexTensor z = x_prev;
    axpy(-cfg.eta / cfg.sigma2, A.apply_adjoint(v), z);
    ComplexTensor x = f.apply(z);
    check_iterate(x, "pnp_pds", k);

    ComplexTensor w = A.apply(lincomb(2.0, x, -1.0, x_prev));
    w -= y;
    v = lincomb(gamma, v, 1.0 - gamma, w);

    result.trace.rows.push_back(gradient_trace_row(x, y, A, f, cfg, k, t0));
    const bool stop = rel_stop(cfg, x_prev, x);
    x_prev = std::move(x);
    if (stop) break;
  }

  result.uhat = ce_uhat_of(x_prev, y, A, cfg);
  result.xhat = std::move(x_prev);
  return result;
}

PnPResult bfista(const ComplexTensor& y, const ForwardModel& A, const PnPConfig& cfg) {
  if (cfg.lambda < 0.0) throw ConfigError("bfista: lambda must be >= 0");
  TdtDenoiser f(TdtDenoiser::Transform::uwt_haar, cfg.lambda, cfg.uwt_levels, A.exec());
  return pnp_fista(y, A, f, cfg);
}

}  // namespace pnpmri
