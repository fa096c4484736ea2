#include "pnpmri/metrics.hpp"

#include <cmath>
#include <limits>

#include "pnpmri/errors.hpp"

namespace pnpmri {

Metrics rsnr(const ComplexTensor& x, const ComplexTensor& xhat) {
  require_same_shape(x, xhat, "rsnr");
  const double ref = norm2(x);
  if (ref <= 0.0) throw ConfigError("rsnr: reference has zero norm");
  const double err = norm2(xhat - x);
  if (err == 0.0) {
    const double inf = std::numeric_limits<double>::infinity();
    return {inf, -inf};
  }
  const double rsnr_db = 10.0 * std::log10(ref / err);
  return {rsnr_db, -rsnr_db};
}

}  // namespace pnpmri
