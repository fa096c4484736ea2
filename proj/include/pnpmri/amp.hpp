#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pnpmri/exec.hpp"
#include "pnpmri/trace.hpp"

namespace pnpmri {

/// M x N sensing matrix with i.i.d. N(0, 1/M) entries (|A|_F ~ sqrt(N)),
/// reproducible from the seed. Real-valued throughout this module.
struct GaussianEnsemble {
  Eigen::MatrixXd A;
  std::uint64_t seed = 0;
  double frob = 0.0;

  static GaussianEnsemble make(int M, int N, std::uint64_t seed);
  int M() const { return static_cast<int>(A.rows()); }
  int N() const { return static_cast<int>(A.cols()); }
};

/// Separable (coordinatewise) denoiser family f_k, parameterized by the
/// effective noise variance eta_k of the current iteration.
class AmpDenoiser {
 public:
  virtual ~AmpDenoiser() = default;
  virtual double scalar(double v, double eta) const = 0;
  Eigen::VectorXd apply(const Eigen::VectorXd& z, double eta) const;
  /// Exact trace of the Jacobian at z, when available in closed form.
  virtual std::optional<double> analytic_divergence(const Eigen::VectorXd&, double) const {
    return std::nullopt;
  }
  virtual std::string name() const = 0;
};

struct ZeroAmpDenoiser final : AmpDenoiser {
  double scalar(double, double) const override { return 0.0; }
  std::optional<double> analytic_divergence(const Eigen::VectorXd&, double) const override {
    return 0.0;
  }
  std::string name() const override { return "zero"; }
};

struct IdentityAmpDenoiser final : AmpDenoiser {
  double scalar(double v, double) const override { return v; }
  std::optional<double> analytic_divergence(const Eigen::VectorXd& z, double) const override {
    return static_cast<double>(z.size());
  }
  std::string name() const override { return "identity"; }
};

/// Soft thresholding at tau_k = c * sqrt(eta_k); divergence = #{|z_n| > tau}.
struct SoftThreshAmpDenoiser final : AmpDenoiser {
  double c;
  explicit SoftThreshAmpDenoiser(double c_) : c(c_) {}
  double scalar(double v, double eta) const override;
  std::optional<double> analytic_divergence(const Eigen::VectorXd& z, double eta) const override;
  std::string name() const override { return "soft_thresh"; }
};

/// Monte-Carlo trace-of-Jacobian estimate p^T [f(z + eps p) - f(z)] / eps,
/// p ~ N(0, I), averaged over `probes` draws.
double mc_divergence(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                     const Eigen::VectorXd& z, double eps, int probes, std::uint64_t seed);

struct AmpState {
  Eigen::VectorXd x;  // current estimate x_k
  Eigen::VectorXd v;  // residual v_k
  Eigen::VectorXd z;  // denoiser input z_k
  double eta = 0.0;   // empirical |v_k|^2 / M
  double div = 0.0;   // tr{J f_k(z_k)} carried into the next residual update
  int k = 0;

  static AmpState initial(int M, int N);
};

struct DampOptions {
  bool onsager = true;
  bool use_analytic_divergence = true;
  int mc_probes = 1;
  double mc_eps_scale = 1e-5;  // eps = |z| * scale / sqrt(N)
  std::uint64_t seed = 0;
  const Eigen::VectorXd* truth = nullptr;  // enables nmse tracing
  double divergence_guard = 1e6;           // flag runs with eta_k > guard * eta_1
};

/// One recursion step; the Onsager weight uses the divergence recorded by the
/// previous step's denoiser at the previous z (the listing's indexing).
AmpState damp_step(const AmpState& state, const Eigen::VectorXd& y, const GaussianEnsemble& ens,
                   const AmpDenoiser& f, const DampOptions& opt);

struct DampResult {
  Eigen::VectorXd xhat;
  std::vector<double> eta_seq;  // empirical eta_1..eta_K
  AmpTrace trace;
  bool diverged = false;
};

DampResult damp_run(const Eigen::VectorXd& y, const GaussianEnsemble& ens, const AmpDenoiser& f,
                    int iters, const DampOptions& opt);

/// Scalar i.i.d. prior: x = b*g with b ~ Bernoulli(rho), g ~ N(0,1).
struct BernoulliGaussianPrior {
  double rho = 0.1;
  double second_moment() const { return rho; }
  double sample(class Rng& rng) const;
};

/// Effective-noise recursion eta_{k+1} = sigma2 + (N/M) E|f(x + sqrt(eta_k) n, eta_k) - x|^2,
/// started at eta_1 = sigma2 + (N/M) E|x|^2 (x_0 = 0). The expectation is a
/// Monte-Carlo average over mc_samples scalar draws, deterministic given the
/// seed (fixed chunked reduction). Returns eta_1..eta_iters.
std::vector<double> state_evolution(const BernoulliGaussianPrior& prior, const AmpDenoiser& f,
                                    double sigma2, int M, int N, int iters, int mc_samples,
                                    std::uint64_t seed, ExecPolicy exec = default_exec());

}  // namespace pnpmri
