#include "pnpmri/red.hpp"

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

ComplexTensor initial_image(const ComplexTensor& y, const ForwardModel& A, const RedConfig& cfg) {
  switch (cfg.init) {
    case RedInitKind::zero:
      return ComplexTensor(A.image_shape());
    case RedInitKind::adjoint:
      return A.apply_adjoint(y);
    case RedInitKind::given:
      if (cfg.init_tensor.shape != A.image_shape())
        throw ConfigError("red: init tensor has wrong shape");
      return cfg.init_tensor;
  }
  throw ConfigError("red: unknown init kind");
}

double validated_L(const RedConfig& cfg, std::vector<std::string>& warnings) {
  if (cfg.variant == RedVariant::fp) {
    if (cfg.L != 1.0)
      warnings.push_back("fixed-point variant forces L = 1 (configured L ignored)");
    return 1.0;
  }
  if (cfg.L < 1.0) throw ConfigError("red: L must be >= 1");
  if (cfg.L == 1.0)
    warnings.push_back("L = 1: the nonexpansive-denoiser convergence guarantee needs L > 1");
  return cfg.L;
}

}  // namespace

std::pair<ComplexTensor, double> red_residual(const ComplexTensor& x, const ComplexTensor& y,
                                              const ForwardModel& A, const Denoiser& f, double eta,
                                              double sigma2) {
  if (x.shape != A.image_shape()) throw ShapeError("red_residual: x has wrong shape");
  if (y.shape != A.kspace_shape()) throw ShapeError("red_residual: y has wrong shape");
  if (!(eta > 0.0) || !(sigma2 > 0.0)) throw ConfigError("red_residual: eta, sigma2 must be > 0");
  ComplexTensor r = A.apply(x);
  r -= y;
  ComplexTensor res = A.apply_adjoint(r);
  scale(res, 1.0 / sigma2);
  ComplexTensor fx = f.apply(x);
  for (std::size_t i = 0; i < res.size(); ++i)
    res.data[i] += (x.data[i] - fx.data[i]) / eta;
  const double n = norm(res);
  return {std::move(res), n};
}

namespace {

struct RedLoopState {
  ComplexTensor x_prev, v;
  double q_prev = 1.0;
};

RedResult run_red(const ComplexTensor& y, const ForwardModel& A, const Denoiser& f,
                  const RedConfig& cfg, bool gd_data_step) {
  RedResult result;
  if (y.shape != A.kspace_shape()) throw ShapeError("red: y does not match the model's k-space");
  if (!(cfg.eta > 0.0)) throw ConfigError("red: eta must be positive");
  if (!(cfg.sigma2 > 0.0)) throw ConfigError("red: sigma2 must be positive");
  if (cfg.max_iters < 1) throw ConfigError("red: max_iters must be >= 1");
  const double L = validated_L(cfg, result.warnings);
  const bool unit_momentum = cfg.variant == RedVariant::fp;
  if (!f.claims_nonexpansive())
    result.warnings.push_back("denoiser '" + f.name() +
                              "' does not claim nonexpansiveness; convergence is not certified");
  f.set_eta(cfg.eta);

  DataProx h(A, cfg.eta / L, cfg.sigma2, cfg.inner);
  if (!gd_data_step) h.set_y(y);

  RedLoopState st;
  st.x_prev = initial_image(y, A, cfg);
  st.v = st.x_prev;

  const auto t0 = Clock::now();
  for (int k = 0; k < cfg.max_iters; ++k) {
    ComplexTensor x;
    if (gd_data_step) {
      // One gradient step on the data subproblem at x_{k-1}:
      // x = v - (eta/(L sigma2)) A^H (A x_{k-1} - y).
      ComplexTensor r = A.apply(st.x_prev);
      r -= y;
      x = st.v;
      axpy(-cfg.eta / (L * cfg.sigma2), A.apply_adjoint(r), x);
    } else {
      x = h.apply(st.v);
    }
    if (!all_finite(x))
      throw NumericError("red: non-finite iterate at iteration " + std::to_string(k + 1));

    const double q = unit_momentum ? 1.0 : 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * st.q_prev * st.q_prev));
    const ComplexTensor z =
        lincomb(1.0 + (st.q_prev - 1.0) / q, x, -(st.q_prev - 1.0) / q, st.x_prev);
    st.v = lincomb(1.0 / L, f.apply(z), 1.0 - 1.0 / L, z);
    st.q_prev = q;

    SolverTraceRow row;
    row.iter = k + 1;
    row.nmse_db = cfg.reference ? rsnr(*cfg.reference, x).nmse_db : std::nan("");
    ComplexTensor res = A.apply(x);
    res -= y;
    row.data_fidelity = 0.5 / cfg.sigma2 * norm2(res);
    if (cfg.trace_ce) {
      // Optimality residual; the consensus columns carry its eta-scaled twin
      // (closed-form correction makes the data-agent residual exactly zero).
      ComplexTensor grad = A.apply_adjoint(res);
      scale(grad, 1.0 / cfg.sigma2);
      ComplexTensor fx = f.apply(x);
      for (std::size_t i = 0; i < grad.size(); ++i)
        grad.data[i] += (x.data[i] - fx.data[i]) / cfg.eta;
      row.red_residual_norm = norm(grad);
      row.ce_res_h = 0.0;
      row.ce_res_f = cfg.eta * row.red_residual_norm;
    }
    row.seconds = seconds_since(t0);
    result.trace.rows.push_back(row);
    result.trace.has_red_residual = true;

    const bool stop = cfg.rel_change_stop > 0.0 && norm(st.x_prev) > 0.0 &&
                      norm(x - st.x_prev) / norm(st.x_prev) < cfg.rel_change_stop;
    st.x_prev = std::move(x);
    if (stop) break;
  }

  result.final_residual_norm =
      red_residual(st.x_prev, y, A, f, cfg.eta, cfg.sigma2).second;
  result.xhat = std::move(st.x_prev);
  return result;
}

}  // namespace

RedResult red_apg(const ComplexTensor& y, const ForwardModel& A, const Denoiser& f,
                  const RedConfig& cfg) {
  return run_red(y, A, f, cfg, /*gd_data_step=*/false);
}

RedResult red_gd(const ComplexTensor& y, const ForwardModel& A, const Denoiser& f,
                 const RedConfig& cfg) {
  return run_red(y, A, f, cfg, /*gd_data_step=*/true);
}

RedResult red_solve(const ComplexTensor& y, const ForwardModel& A, const Denoiser& f,
                    const RedConfig& cfg) {
  if (cfg.variant == RedVariant::gd) return red_gd(y, A, f, cfg);
  return red_apg(y, A, f, cfg);
}

}  // namespace pnpmri
