#include "pnpmri/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "pnpmri/errors.hpp"

namespace pnpmri {

double magnitude_percentile(const ComplexTensor& t, double q) {
  if (t.size() == 0) throw ConfigError("magnitude_percentile: empty tensor");
  if (!(q >= 0.0 && q <= 100.0)) throw ConfigError("magnitude_percentile: q out of range");
  std::vector<double> mags(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) mags[i] = std::abs(t.data[i]);
  std::sort(mags.begin(), mags.end());
  const std::size_t rank =
      std::min(t.size() - 1, static_cast<std::size_t>(std::ceil(q / 100.0 * t.size())) -
                                 (q > 0.0 ? 1 : 0));
  return mags[rank];
}

void write_magnitude_pgm(const ComplexTensor& cine, std::size_t frame, double white, double gain,
                         const std::string& path) {
  if (cine.ndim() != 3) throw ShapeError("write_magnitude_pgm: expected [nx,ny,nt]");
  const std::size_t nx = cine.dim(0), ny = cine.dim(1), nt = cine.dim(2);
  if (frame >= nt) throw ConfigError("write_magnitude_pgm: frame out of range");
  if (!(white > 0.0)) white = 1.0;

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("write_magnitude_pgm: cannot open " + path);
  f << "P5\n" << ny << " " << nx << "\n255\n";
  std::vector<unsigned char> row(ny);
  for (std::size_t ix = 0; ix < nx; ++ix) {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const double v = gain * std::abs(cine.data[(ix * ny + iy) * nt + frame]) / white * 255.0;
      row[iy] = static_cast<unsigned char>(std::clamp(v, 0.0, 255.0));
    }
    f.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(ny));
  }
  if (!f) throw IoError("write_magnitude_pgm: write failed for " + path);
}

}  // namespace pnpmri
