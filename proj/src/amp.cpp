#include "pnpmri/amp.hpp"

#include <cmath>

#include "pnpmri/errors.hpp"
#include "pnpmri/rng.hpp"

namespace pnpmri {

GaussianEnsemble GaussianEnsemble::make(int M, int N, std::uint64_t seed) {
  if (M < 1 || N < 1) throw ConfigError("GaussianEnsemble: M, N must be >= 1");
  GaussianEnsemble e;
  e.seed = seed;
  e.A.resize(M, N);
  Rng rng(seed);
  const double s = 1.0 / std::sqrt(double(M));
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < N; ++j) e.A(i, j) = s * rng.normal();
  e.frob = e.A.norm();
  if (std::size_t(M) * std::size_t(N) >= 10000) {
    const double target = std::sqrt(double(N));
    if (std::abs(e.frob - target) > 0.05 * target)
      throw NumericError("GaussianEnsemble: Frobenius norm out of tolerance");
  }
  return e;
}

Eigen::VectorXd AmpDenoiser::apply(const Eigen::VectorXd& z, double eta) const {
  Eigen::VectorXd out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) out(i) = scalar(z(i), eta);
  return out;
}

double SoftThreshAmpDenoiser::scalar(double v, double eta) const {
  const double tau = c * std::sqrt(eta);
  if (v > tau) return v - tau;
  if (v < -tau) return v + tau;
  return 0.0;
}

std::optional<double> SoftThreshAmpDenoiser::analytic_divergence(const Eigen::VectorXd& z,
                                                                 double eta) const {
  const double tau = c * std::sqrt(eta);
  double count = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (std::abs(z(i)) > tau) count += 1.0;
  return count;
}

double mc_divergence(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                     const Eigen::VectorXd& z, double eps, int probes, std::uint64_t seed) {
  if (!(eps > 0.0)) throw ConfigError("mc_divergence: eps must be positive");
  if (probes < 1) throw ConfigError("mc_divergence: probes must be >= 1");
  const Eigen::VectorXd fz = f(z);
  double acc = 0.0;
  for (int p = 0; p < probes; ++p) {
    Rng rng = Rng::derive(seed, std::uint64_t(p));
    Eigen::VectorXd dir(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) dir(i) = rng.normal();
    const Eigen::VectorXd fp = f(z + eps * dir);
    acc += dir.dot(fp - fz) / eps;
  }
  return acc / probes;
}

AmpState AmpState::initial(int M, int N) {
  AmpState s;
  s.x = Eigen::VectorXd::Zero(N);
  s.v = Eigen::VectorXd::Zero(M);
  s.z = Eigen::VectorXd::Zero(N);
  s.eta = 0.0;
  s.div = 0.0;
  s.k = 0;
  return s;
}

AmpState damp_step(const AmpState& state, const Eigen::VectorXd& y, const GaussianEnsemble& ens,
                   const AmpDenoiser& f, const DampOptions& opt) {
  const int M = ens.M();
  const int N = ens.N();
  if (y.size() != M || state.x.size() != N)
    throw ShapeError("damp_step: dimension mismatch with the ensemble");

  AmpState next;
  next.k = state.k + 1;
  const double c0 = std::sqrt(double(N)) / ens.frob;
  next.v = c0 * (y - ens.A * state.x);
  if (opt.onsager && state.k > 0) next.v += (state.div / double(M)) * state.v;
  next.eta = next.v.squaredNorm() / double(M);
  next.z = state.x + ens.A.transpose() * next.v;
  next.x = f.apply(next.z, next.eta);

  if (opt.use_analytic_divergence) {
    if (auto d = f.analytic_divergence(next.z, next.eta)) {
      next.div = *d;
      return next;
    }
  }
  const double eps = std::max(next.z.norm(), 1e-12) * opt.mc_eps_scale / std::sqrt(double(N));
  const double eta = next.eta;
  next.div = mc_divergence([&](const Eigen::VectorXd& w) { return f.apply(w, eta); }, next.z, eps,
                           opt.mc_probes, derive_seed(opt.seed, std::uint64_t(next.k)));
  return next;
}

DampResult damp_run(const Eigen::VectorXd& y, const GaussianEnsemble& ens, const AmpDenoiser& f,
                    int iters, const DampOptions& opt) {
  if (iters < 1) throw ConfigError("damp_run: iters must be >= 1");
  DampResult result;
  AmpState state = AmpState::initial(ens.M(), ens.N());
  double eta1 = 0.0;
  for (int k = 0; k < iters; ++k) {
    state = damp_step(state, y, ens, f, opt);
    if (k == 0) eta1 = state.eta;
    result.eta_seq.push_back(state.eta);

    AmpTraceRow row;
    row.iter = state.k;
    row.empirical_eta = state.eta;
    row.se_eta = std::nan("");
    row.nmse_db = std::nan("");
    if (opt.truth && opt.truth->squaredNorm() > 0.0)
      row.nmse_db = 10.0 * std::log10((state.x - *opt.truth).squaredNorm() /
                                      opt.truth->squaredNorm());
    result.trace.rows.push_back(row);

    if (!std::isfinite(state.eta) || state.eta > opt.divergence_guard * eta1) {
      result.diverged = true;
      break;
    }
  }
  result.xhat = state.x;
  return result;
}

double BernoulliGaussianPrior::sample(Rng& rng) const {
  if (rng.uniform() < rho) return rng.normal();
  return 0.0;
}

namespace {

// Denoiser MSE at effective variance eta: chunked Monte-Carlo with
// per-chunk derived streams; chunk partials summed in index order, so the
// result is independent of the thread count.
double mse_by_mc(const BernoulliGaussianPrior& prior, const AmpDenoiser& f, double eta,
                 int mc_samples, std::uint64_t seed, ExecPolicy exec) {
  constexpr int kChunk = 4096;
  const int chunks = (mc_samples + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);

  auto run_chunk = [&](int c) {
    const int lo = c * kChunk;
    const int hi = std::min(mc_samples, lo + kChunk);
    Rng rng = Rng::derive(seed, std::uint64_t(c));
    double acc = 0.0;
    const double sd = std::sqrt(eta);
    for (int s = lo; s < hi; ++s) {
      const double x = prior.sample(rng);
      const double z = x + sd * rng.normal();
      const double d = f.scalar(z, eta) - x;
      acc += d * d;
    }
    partial[c] = acc;
  };

  if (exec == ExecPolicy::parallel) {
#pragma omp parallel for schedule(static)
    for (int c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    for (int c = 0; c < chunks; ++c) run_chunk(c);
  }

  double total = 0.0;
  for (int c = 0; c < chunks; ++c) total += partial[c];
  return total / mc_samples;
}

}  // namespace

std::vector<double> state_evolution(const BernoulliGaussianPrior& prior, const AmpDenoiser& f,
                                    double sigma2, int M, int N, int iters, int mc_samples,
                                    std::uint64_t seed, ExecPolicy exec) {
  if (iters < 1 || mc_samples < 1) throw ConfigError("state_evolution: bad iteration/sample count");
  if (M < 1 || N < 1) throw ConfigError("state_evolution: bad dimensions");
  const double undersampling = double(N) / double(M);
  std::vector<double> eta;
  eta.reserve(iters);
  eta.push_back(sigma2 + undersampling * prior.second_moment());
  for (int k = 1; k < iters; ++k) {
    const double mse = mse_by_mc(prior, f, eta.back(), mc_samples, derive_seed(seed, std::uint64_t(k)), exec);
    eta.push_back(sigma2 + undersampling * mse);
  }
  return eta;
}

}  // namespace pnpmri
