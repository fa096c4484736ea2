#include "pnpmri/sampling.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "pnpmri/errors.hpp"

namespace pnpmri {

void SamplingPattern::validate() const {
  if (nx == 0 || ny == 0 || nt == 0) throw ConfigError("SamplingPattern: zero dimension");
  if (frames.size() != nt)
    throw ConfigError("SamplingPattern: frame count " + std::to_string(frames.size()) +
                      " != nt " + std::to_string(nt));
  const std::size_t lines = frames.empty() ? 0 : frames[0].size();
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const auto& f = frames[t];
    if (f.empty()) throw ConfigError("SamplingPattern: empty frame " + std::to_string(t));
    if (f.size() != lines)
      throw ConfigError("SamplingPattern: uneven line count at frame " + std::to_string(t));
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f[i] >= ny) throw ConfigError("SamplingPattern: line index out of range");
      if (i > 0 && f[i] <= f[i - 1])
        throw ConfigError("SamplingPattern: indices must be strictly increasing per frame");
    }
  }
}

std::string SamplingPattern::to_json() const {
  nlohmann::json j;
  j["nx"] = nx;
  j["ny"] = ny;
  j["nt"] = nt;
  j["frames"] = frames;
  return j.dump();
}

SamplingPattern SamplingPattern::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("SamplingPattern: bad JSON: ") + e.what());
  }
  SamplingPattern p;
  try {
    p.nx = j.at("nx").get<std::size_t>();
    p.ny = j.at("ny").get<std::size_t>();
    p.nt = j.at("nt").get<std::size_t>();
    p.frames = j.at("frames").get<std::vector<std::vector<std::uint32_t>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("SamplingPattern: missing field: ") + e.what());
  }
  p.validate();
  return p;
}

void CoilMaps::validate(double tol) const {
  if (C == 0 || nx == 0 || ny == 0) throw ConfigError("CoilMaps: zero dimension");
  if (maps.size() != C * nx * ny) throw ConfigError("CoilMaps: storage size mismatch");
  for (std::size_t p = 0; p < nx * ny; ++p) {
    double sos = 0.0;
    for (std::size_t i = 0; i < C; ++i) sos += std::norm(maps[i * nx * ny + p]);
    if (std::abs(sos - 1.0) > tol)
      throw ConfigError("CoilMaps: sum-of-squares deviates from 1 by " +
                        std::to_string(std::abs(sos - 1.0)));
  }
}

ComplexTensor CoilMaps::as_tensor() const {
  ComplexTensor t({C, nx, ny});
  t.data = maps;
  return t;
}

CoilMaps CoilMaps::from_tensor(const ComplexTensor& t) {
  if (t.ndim() != 3) throw ShapeError("CoilMaps::from_tensor: expected [C,nx,ny]");
  CoilMaps m;
  m.C = t.dim(0);
  m.nx = t.dim(1);
  m.ny = t.dim(2);
  m.maps = t.data;
  m.validate();
  return m;
}

}  // namespace pnpmri
