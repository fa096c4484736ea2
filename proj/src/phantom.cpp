#include "pnpmri/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pnpmri/errors.hpp"
#include "pnpmri/rng.hpp"

namespace pnpmri {

ComplexTensor make_phantom(const PhantomSpec& spec) {
  if (spec.nx == 0 || spec.ny == 0 || spec.nt == 0)
    throw ConfigError("make_phantom: zero dimension");
  for (const Ellipse& e : spec.ellipses)
    if (!(e.ax > 0.0) || !(e.ay > 0.0))
      throw ConfigError("make_phantom: degenerate ellipse (nonpositive axes)");
  if (!(spec.edge > 0.0)) throw ConfigError("make_phantom: edge width must be positive");

  ComplexTensor x({spec.nx, spec.ny, spec.nt});
  const std::size_t nt = spec.nt;
  for (std::size_t ix = 0; ix < spec.nx; ++ix) {
    const double u = (double(ix) + 0.5) / double(spec.nx);
    for (std::size_t iy = 0; iy < spec.ny; ++iy) {
      const double v = (double(iy) + 0.5) / double(spec.ny);
      const double phase = 2.0 * M_PI * (spec.phase_ramp_x * u + spec.phase_ramp_y * v);
      const cplx ramp(std::cos(phase), std::sin(phase));
      for (std::size_t t = 0; t < nt; ++t) {
        double acc = 0.0;
        for (const Ellipse& e : spec.ellipses) {
          const double s = 1.0 + e.mod_amp * std::sin(2.0 * M_PI * double(t) / double(nt) +
                                                      e.mod_phase);
          const double du = (u - e.cx) / (e.ax * s);
          const double dv = (v - e.cy) / (e.ay * s);
          const double r = std::sqrt(du * du + dv * dv);
          acc += e.intensity / (1.0 + std::exp((r - 1.0) / spec.edge));
        }
        const double mag = std::min(acc, 1.0);
        x.data[(ix * spec.ny + iy) * nt + t] = mag * ramp;
      }
    }
  }
  return x;
}

PhantomSpec random_phantom_spec(std::size_t nx, std::size_t ny, std::size_t nt,
                                std::size_t n_ellipses, std::uint64_t seed) {
  PhantomSpec spec;
  spec.nx = nx;
  spec.ny = ny;
  spec.nt = nt;
  spec.seed = seed;
  Rng rng(seed);
  for (std::size_t i = 0; i < n_ellipses; ++i) {
    Ellipse e;
    e.cx = 0.25 + 0.5 * rng.uniform();
    e.cy = 0.25 + 0.5 * rng.uniform();
    e.ax = 0.06 + 0.22 * rng.uniform();
    e.ay = 0.06 + 0.22 * rng.uniform();
    e.intensity = 0.35 + 0.65 * rng.uniform();
    e.mod_amp = 0.25 * rng.uniform();
    e.mod_phase = 2.0 * M_PI * rng.uniform();
    spec.ellipses.push_back(e);
  }
  return spec;
}

CoilMaps make_coilmaps(std::size_t nx, std::size_t ny, std::size_t C, std::uint64_t seed) {
  if (C < 1) throw ConfigError("make_coilmaps: C must be >= 1");
  CoilMaps cm;
  cm.C = C;
  cm.nx = nx;
  cm.ny = ny;
  cm.maps.assign(C * nx * ny, cplx(0.0, 0.0));

  Rng rng(seed);
  struct Bump {
    double cx, cy, width, phi0, kx, ky;
  };
  std::vector<Bump> bumps;
  for (std::size_t i = 0; i < C; ++i) {
    const double angle = 2.0 * M_PI * (double(i) + 0.35 * rng.uniform()) / double(C);
    Bump b;
    b.cx = 0.5 + 0.55 * std::cos(angle);
    b.cy = 0.5 + 0.55 * std::sin(angle);
    b.width = 0.45 + 0.2 * rng.uniform();
    b.phi0 = 2.0 * M_PI * rng.uniform();
    b.kx = 0.5 * (rng.uniform() - 0.5);
    b.ky = 0.5 * (rng.uniform() - 0.5);
    bumps.push_back(b);
  }

  for (std::size_t ix = 0; ix < nx; ++ix) {
    const double u = (double(ix) + 0.5) / double(nx);
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const double v = (double(iy) + 0.5) / double(ny);
      double sos = 0.0;
      for (std::size_t i = 0; i < C; ++i) {
        const Bump& b = bumps[i];
        const double d2 = (u - b.cx) * (u - b.cx) + (v - b.cy) * (v - b.cy);
        const double mag = std::exp(-d2 / (2.0 * b.width * b.width));
        const double ph = b.phi0 + 2.0 * M_PI * (b.kx * u + b.ky * v);
        cm.maps[i * nx * ny + ix * ny + iy] = mag * cplx(std::cos(ph), std::sin(ph));
        sos += mag * mag;
      }
      const double inv = 1.0 / std::sqrt(sos);  // Gaussian bumps are strictly positive
      for (std::size_t i = 0; i < C; ++i) cm.maps[i * nx * ny + ix * ny + iy] *= inv;
    }
  }
  cm.validate();
  return cm;
}

SamplingPattern make_sampling(std::size_t nx, std::size_t ny, std::size_t nt, double R,
                              SamplingScheme scheme, double density_exponent,
                              std::size_t acs_lines, std::uint64_t seed) {
  if (!(R >= 1.0)) throw ConfigError("make_sampling: acceleration R must be >= 1");
  if (nx == 0 || ny == 0 || nt == 0) throw ConfigError("make_sampling: zero dimension");
  const std::size_t lines = static_cast<std::size_t>(std::llround(double(ny) / R));
  if (lines < 1 || lines > ny) throw ConfigError("make_sampling: round(ny/R) out of range");
  if (acs_lines > lines)
    throw ConfigError("make_sampling: acs_lines " + std::to_string(acs_lines) +
                      " exceeds the per-frame budget " + std::to_string(lines));

  // Wrapped-central ordering: 0, 1, ny-1, 2, ny-2, ...
  std::vector<std::uint32_t> center_order;
  center_order.push_back(0);
  for (std::uint32_t k = 1; center_order.size() < ny; ++k) {
    center_order.push_back(k);
    if (center_order.size() < ny && k != ny - k) center_order.push_back(std::uint32_t(ny - k));
  }

  std::vector<bool> is_acs(ny, false);
  for (std::size_t i = 0; i < acs_lines; ++i) is_acs[center_order[i]] = true;

  const double k_max = double(ny) / 2.0;
  SamplingPattern p;
  p.nx = nx;
  p.ny = ny;
  p.nt = nt;
  p.frames.resize(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    std::vector<std::uint32_t> chosen;
    for (std::uint32_t l = 0; l < ny; ++l)
      if (is_acs[l]) chosen.push_back(l);

    const std::size_t want = lines - chosen.size();
    std::vector<std::uint32_t> pool;
    std::vector<double> weights;
    for (std::uint32_t l = 0; l < ny; ++l) {
      if (is_acs[l]) continue;
      pool.push_back(l);
      if (scheme == SamplingScheme::uniform_random) {
        weights.push_back(1.0);
      } else {
        const double k = std::min<double>(l, double(ny - l));
        const double w = std::pow(std::max(0.0, 1.0 - k / k_max), density_exponent);
        weights.push_back(w + 1e-12);  // keep the Nyquist line drawable
      }
    }
    Rng rng = Rng::derive(seed, t);
    if (want > 0) {
      const auto picks = weighted_sample_without_replacement(rng, weights,
                                                             static_cast<std::uint32_t>(want));
      for (std::uint32_t i : picks) chosen.push_back(pool[i]);
    }
    std::sort(chosen.begin(), chosen.end());
    p.frames[t] = std::move(chosen);
  }
  p.validate();
  return p;
}

std::pair<ComplexTensor, double> add_noise(const ComplexTensor& y, double snr_db,
                                           std::uint64_t seed) {
  if (y.size() == 0) throw ConfigError("add_noise: empty measurement stack");
  if (std::isinf(snr_db)) return {y, 0.0};
  const double sigma2 = norm2(y) * std::pow(10.0, -snr_db / 10.0) / double(y.size());
  Rng rng(seed);
  ComplexTensor noisy = y;
  for (cplx& v : noisy.data) v += rng.cnormal(sigma2);
  return {std::move(noisy), sigma2};
}

}  // namespace pnpmri
