#pragma once

#include <vector>

#include "pnpmri/errors.hpp"

namespace pnpmri {

/// Gaussian kernel density estimate over a finite training set: the prior is
/// the equal-weight mixture of N(x_t, eta I). All vectors are real; complex
/// signals enter through the real-isomorphic [re..., im...] layout.
struct TrainingSet {
  std::vector<std::vector<double>> points;  // T vectors of equal length
  double eta = 0.0;                         // bandwidth, > 0

  std::size_t count() const { return points.size(); }
  std::size_t dim() const { return points.empty() ? 0 : points[0].size(); }
  void validate() const;
};

/// Posterior weights w_t proportional to N(z; x_t, eta I), log-sum-exp
/// stabilized; sums to 1.
std::vector<double> kde_posterior_weights(const TrainingSet& ts, const std::vector<double>& z);

/// MMSE denoiser under the mixture prior: the posterior mean sum_t w_t x_t.
std::vector<double> kde_posterior_mean(const TrainingSet& ts, const std::vector<double>& z);

/// ln p~(z; eta), including normalization constants.
double kde_log_density(const TrainingSet& ts, const std::vector<double>& z);

/// Analytic score grad ln p~(z; eta) = (posterior_mean(z) - z) / eta.
std::vector<double> kde_score(const TrainingSet& ts, const std::vector<double>& z);

}  // namespace pnpmri
