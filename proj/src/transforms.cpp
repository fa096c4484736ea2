#include "pnpmri/transforms.hpp"

#include <cmath>

#include "pnpmri/errors.hpp"

namespace pnpmri {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::vector<std::size_t> transformable_axes(const Shape& shape) {
  std::vector<std::size_t> axes;
  for (std::size_t a = 0; a < shape.size(); ++a)
    if (shape[a] > 1) axes.push_back(a);
  return axes;
}

std::size_t axis_stride(const Shape& shape, std::size_t axis) {
  std::size_t s = 1;
  for (std::size_t a = axis + 1; a < shape.size(); ++a) s *= shape[a];
  return s;
}

}  // namespace

// --- orthonormal Haar -------------------------------------------------------

namespace {

// In-place pairwise butterfly along `axis` within the block of extents
// `block`; m = block[axis] must be even. forward packs lows then highs.
void haar_axis_pass(ComplexTensor& t, const Shape& block, std::size_t axis, bool forward) {
  const std::size_t m = block[axis];
  const std::size_t stride = axis_stride(t.shape, axis);
  std::vector<cplx> line(m);

  // iterate lines by outer/inner decomposition of the block
  std::size_t outer = 1, inner = 1;
  for (std::size_t a = 0; a < axis; ++a) outer *= block[a];
  for (std::size_t a = axis + 1; a < t.shape.size(); ++a) inner *= block[a];

  // strides in the FULL tensor for block coordinates
  std::vector<std::size_t> outer_dims(block.begin(), block.begin() + axis);
  std::vector<std::size_t> inner_dims(block.begin() + axis + 1, block.end());

  for (std::size_t o = 0; o < outer; ++o) {
    // decompose o into block coords over axes < axis
    std::size_t rem = o, obase = 0;
    for (std::size_t a = axis; a-- > 0;) {
      const std::size_t c = rem % block[a];
      rem /= block[a];
      obase += c * axis_stride(t.shape, a);
    }
    for (std::size_t in = 0; in < inner; ++in) {
      std::size_t rem2 = in, ibase = 0;
      for (std::size_t a = t.shape.size(); a-- > axis + 1;) {
        const std::size_t c = rem2 % block[a];
        rem2 /= block[a];
        ibase += c * axis_stride(t.shape, a);
      }
      const std::size_t base = obase + ibase;
      for (std::size_t j = 0; j < m; ++j) line[j] = t.data[base + j * stride];
      if (forward) {
        for (std::size_t j = 0; j < m / 2; ++j) {
          t.data[base + j * stride] = (line[2 * j] + line[2 * j + 1]) * kInvSqrt2;
          t.data[base + (m / 2 + j) * stride] = (line[2 * j] - line[2 * j + 1]) * kInvSqrt2;
        }
      } else {
        for (std::size_t j = 0; j < m / 2; ++j) {
          t.data[base + 2 * j * stride] = (line[j] + line[m / 2 + j]) * kInvSqrt2;
          t.data[base + (2 * j + 1) * stride] = (line[j] - line[m / 2 + j]) * kInvSqrt2;
        }
      }
    }
  }
}

void check_haar_dims(const Shape& shape, int levels) {
  if (levels < 1) throw ConfigError("haar: levels must be >= 1");
  for (std::size_t d : shape)
    if (d > 1 && (d % (std::size_t(1) << levels)) != 0)
      throw ShapeError("haar: axis extent " + std::to_string(d) + " not divisible by 2^" +
                       std::to_string(levels));
}

}  // namespace

ComplexTensor haar_forward(const ComplexTensor& x, int levels) {
  check_haar_dims(x.shape, levels);
  ComplexTensor t = x;
  const auto axes = transformable_axes(x.shape);
  if (axes.empty()) return t;
  Shape block = x.shape;
  for (int lev = 0; lev < levels; ++lev) {
    for (std::size_t a : axes) haar_axis_pass(t, block, a, /*forward=*/true);
    for (std::size_t a : axes) block[a] /= 2;
  }
  return t;
}

ComplexTensor haar_inverse(const ComplexTensor& coeffs, int levels) {
  check_haar_dims(coeffs.shape, levels);
  ComplexTensor t = coeffs;
  const auto axes = transformable_axes(coeffs.shape);
  if (axes.empty()) return t;
  Shape block = coeffs.shape;
  for (std::size_t a : axes) block[a] >>= levels;
  for (int lev = levels - 1; lev >= 0; --lev) {
    for (std::size_t a : axes) block[a] *= 2;
    for (auto it = axes.rbegin(); it != axes.rend(); ++it)
      haar_axis_pass(t, block, *it, /*forward=*/false);
  }
  return t;
}

// --- undecimated Haar (tight frame) -----------------------------------------

namespace {

// Split volume v along `axis` with dilation s into low/high, circular, taps
// (1/2, +-1/2). Tight per axis: |L(w)|^2 + |H(w)|^2 = 1. The parallel path
// splits the (outer x axis) rows across threads; writes are disjoint.
void uwt_axis_split(const std::vector<cplx>& v, std::vector<cplx>& low, std::vector<cplx>& high,
                    const Shape& shape, std::size_t axis, std::size_t s, ExecPolicy exec) {
  const std::size_t n = shape[axis];
  const std::size_t stride = axis_stride(shape, axis);
  const std::size_t chunk = n * stride;
  const std::size_t outer = v.size() / chunk;
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(outer * n);

  auto row = [&](std::ptrdiff_t r) {
    const std::size_t o = std::size_t(r) / n;
    const std::size_t j = std::size_t(r) % n;
    const std::size_t base = o * chunk;
    const std::size_t jn = (j + s) % n;
    const cplx* a = v.data() + base + j * stride;
    const cplx* b = v.data() + base + jn * stride;
    cplx* lo = low.data() + base + j * stride;
    cplx* hi = high.data() + base + j * stride;
    for (std::size_t i = 0; i < stride; ++i) {
      lo[i] = 0.5 * (a[i] + b[i]);
      hi[i] = 0.5 * (a[i] - b[i]);
    }
  };
  if (exec == ExecPolicy::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r) row(r);
  } else {
    for (std::ptrdiff_t r = 0; r < rows; ++r) row(r);
  }
}

// Adjoint of uwt_axis_split: out = L^H low + H^H high.
void uwt_axis_merge(std::vector<cplx>& out, const std::vector<cplx>& low,
                    const std::vector<cplx>& high, const Shape& shape, std::size_t axis,
                    std::size_t s, ExecPolicy exec) {
  const std::size_t n = shape[axis];
  const std::size_t stride = axis_stride(shape, axis);
  const std::size_t chunk = n * stride;
  const std::size_t outer = out.size() / chunk;
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(outer * n);

  auto row = [&](std::ptrdiff_t r) {
    const std::size_t o = std::size_t(r) / n;
    const std::size_t j = std::size_t(r) % n;
    const std::size_t base = o * chunk;
    const std::size_t jp = (j + n - (s % n)) % n;
    const cplx* lo0 = low.data() + base + j * stride;
    const cplx* lo1 = low.data() + base + jp * stride;
    const cplx* hi0 = high.data() + base + j * stride;
    const cplx* hi1 = high.data() + base + jp * stride;
    cplx* dst = out.data() + base + j * stride;
    for (std::size_t i = 0; i < stride; ++i)
      dst[i] = 0.5 * (lo0[i] + lo1[i]) + 0.5 * (hi0[i] - hi1[i]);
  };
  if (exec == ExecPolicy::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r) row(r);
  } else {
    for (std::ptrdiff_t r = 0; r < rows; ++r) row(r);
  }
}

}  // namespace

std::size_t uwt_band_count(const Shape& image_shape, int levels) {
  if (levels < 1) throw ConfigError("uwt: levels must be >= 1");
  const std::size_t na = transformable_axes(image_shape).size();
  const std::size_t per_level = (std::size_t(1) << na) - 1;
  return std::size_t(levels) * per_level + 1;
}

ComplexTensor uwt_analyze(const ComplexTensor& x, int levels, ExecPolicy exec) {
  const auto axes = transformable_axes(x.shape);
  const std::size_t nb = uwt_band_count(x.shape, levels);
  const std::size_t numel = x.size();

  Shape out_shape;
  out_shape.push_back(nb);
  for (std::size_t d : x.shape) out_shape.push_back(d);
  ComplexTensor coeffs(out_shape);

  std::vector<cplx> lowpass = x.data;
  std::size_t band = 0;
  for (int lev = 0; lev < levels; ++lev) {
    const std::size_t s = std::size_t(1) << lev;
    // pairwise tree along each axis; bit a of the band index = highpass on axis a
    std::vector<std::vector<cplx>> tree{lowpass};
    for (std::size_t ai = 0; ai < axes.size(); ++ai) {
      std::vector<std::vector<cplx>> next(2 * tree.size());
      for (auto& v : next) v.resize(numel);
      const std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(tree.size());
      if (exec == ExecPolicy::parallel && nb > 1) {
        // coarse tasks: one split per band, disjoint outputs
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t b = 0; b < nb; ++b)
          uwt_axis_split(tree[b], next[b], next[b + nb], x.shape, axes[ai], s,
                         ExecPolicy::serial);
      } else {
        for (std::ptrdiff_t b = 0; b < nb; ++b)
          uwt_axis_split(tree[b], next[b], next[b + nb], x.shape, axes[ai], s, exec);
      }
      tree = std::move(next);
    }
    // tree[bits]: bit ai set means highpass along axes[ai]
    for (std::size_t bits = 1; bits < tree.size(); ++bits) {
      std::copy(tree[bits].begin(), tree[bits].end(), coeffs.data.begin() + band * numel);
      ++band;
    }
    lowpass = std::move(tree[0]);
  }
  std::copy(lowpass.begin(), lowpass.end(), coeffs.data.begin() + band * numel);
  return coeffs;
}

ComplexTensor uwt_synthesize(const ComplexTensor& coeffs, int levels, ExecPolicy exec) {
  if (coeffs.ndim() < 2) throw ShapeError("uwt_synthesize: expected [bands, image...]");
  Shape image_shape(coeffs.shape.begin() + 1, coeffs.shape.end());
  const auto axes = transformable_axes(image_shape);
  const std::size_t nb = uwt_band_count(image_shape, levels);
  if (coeffs.dim(0) != nb)
    throw ShapeError("uwt_synthesize: band count " + std::to_string(coeffs.dim(0)) +
                     " does not match levels=" + std::to_string(levels));
  const std::size_t numel = shape_numel(image_shape);
  const std::size_t per_level = (std::size_t(1) << axes.size()) - 1;

  auto band_data = [&](std::size_t b) {
    return std::vector<cplx>(coeffs.data.begin() + b * numel, coeffs.data.begin() + (b + 1) * numel);
  };

  std::vector<cplx> low = band_data(nb - 1);
  for (int lev = levels - 1; lev >= 0; --lev) {
    const std::size_t s = std::size_t(1) << lev;
    // rebuild the full 2^na leaf set for this level, then merge the tree back
    std::vector<std::vector<cplx>> tree(std::size_t(1) << axes.size());
    tree[0] = std::move(low);
    for (std::size_t bits = 1; bits < tree.size(); ++bits)
      tree[bits] = band_data(std::size_t(lev) * per_level + bits - 1);
    for (std::size_t ai = axes.size(); ai-- > 0;) {
      std::vector<std::vector<cplx>> prev(tree.size() / 2);
      for (auto& v : prev) v.resize(numel);
      const std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(prev.size());
      if (exec == ExecPolicy::parallel && nb > 1) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t b = 0; b < nb; ++b)
          uwt_axis_merge(prev[b], tree[b], tree[b + nb], image_shape, axes[ai], s,
                         ExecPolicy::serial);
      } else {
        for (std::ptrdiff_t b = 0; b < nb; ++b)
          uwt_axis_merge(prev[b], tree[b], tree[b + nb], image_shape, axes[ai], s, exec);
      }
      tree = std::move(prev);
    }
    low = std::move(tree[0]);
  }
  ComplexTensor out(image_shape);
  out.data = std::move(low);
  return out;
}

}  // namespace pnpmri
