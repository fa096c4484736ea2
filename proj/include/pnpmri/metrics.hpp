#pragma once

#include "pnpmri/tensor.hpp"

namespace pnpmri {

/// Reconstruction SNR and its reciprocal, both in dB. nmse_db == -rsnr_db.
struct Metrics {
  double rsnr_db;
  double nmse_db;
};

/// rsnr_db = 10*log10(|x|^2 / |xhat - x|^2). An exact match returns the
/// +infinity sentinel, not an error. Requires |x| > 0 and equal shapes.
Metrics rsnr(const ComplexTensor& x, const ComplexTensor& xhat);

}  // namespace pnpmri
