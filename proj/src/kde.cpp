#include "pnpmri/kde.hpp"

#include <cmath>
#include <limits>

namespace pnpmri {

void TrainingSet::validate() const {
  if (points.empty()) throw ConfigError("TrainingSet: empty");
  if (!(eta > 0.0)) throw ConfigError("TrainingSet: eta must be positive");
  const std::size_t n = points[0].size();
  if (n == 0) throw ConfigError("TrainingSet: zero-dimensional points");
  for (const auto& p : points) {
    if (p.size() != n) throw ConfigError("TrainingSet: inconsistent point dimensions");
    for (double v : p)
      if (!std::isfinite(v)) throw NumericError("TrainingSet: non-finite point");
  }
}

namespace {

// Unnormalized log kernel values -|z - x_t|^2 / (2 eta) and their max.
std::pair<std::vector<double>, double> log_kernels(const TrainingSet& ts,
                                                   const std::vector<double>& z) {
  ts.validate();
  if (z.size() != ts.dim()) throw ShapeError("kde: query dimension mismatch");
  std::vector<double> a(ts.count());
  double amax = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < ts.count(); ++t) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double d = z[i] - ts.points[t][i];
      d2 += d * d;
    }
    a[t] = -d2 / (2.0 * ts.eta);
    amax = std::max(amax, a[t]);
  }
  return {std::move(a), amax};
}

}  // namespace

std::vector<double> kde_posterior_weights(const TrainingSet& ts, const std::vector<double>& z) {
  auto [a, amax] = log_kernels(ts, z);
  double total = 0.0;
  for (double& v : a) {
    v = std::exp(v - amax);
    total += v;
  }
  for (double& v : a) v /= total;
  return a;
}

std::vector<double> kde_posterior_mean(const TrainingSet& ts, const std::vector<double>& z) {
  const std::vector<double> w = kde_posterior_weights(ts, z);
  std::vector<double> mean(ts.dim(), 0.0);
  for (std::size_t t = 0; t < ts.count(); ++t)
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += w[t] * ts.points[t][i];
  return mean;
}

double kde_log_density(const TrainingSet& ts, const std::vector<double>& z) {
  auto [a, amax] = log_kernels(ts, z);
  double s = 0.0;
  for (double v : a) s += std::exp(v - amax);
  const double n = static_cast<double>(ts.dim());
  return amax + std::log(s) - std::log(double(ts.count())) -
         0.5 * n * std::log(2.0 * M_PI * ts.eta);
}

std::vector<double> kde_score(const TrainingSet& ts, const std::vector<double>& z) {
  std::vector<double> mean = kde_posterior_mean(ts, z);
  for (std::size_t i = 0; i < mean.size(); ++i) mean[i] = (mean[i] - z[i]) / ts.eta;
  return mean;
}

}  // namespace pnpmri
