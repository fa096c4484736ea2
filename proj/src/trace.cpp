#include "pnpmri/trace.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "pnpmri/errors.hpp"

namespace pnpmri {

std::string csv_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::string SolverTrace::to_csv(bool include_timing) const {
  std::string s = "iter,nmse_db,data_fidelity,ce_res_h,ce_res_f";
  if (has_red_residual) s += ",red_residual_norm";
  if (include_timing) s += ",seconds";
  s += "\n";
  for (const auto& r : rows) {
    s += std::to_string(r.iter);
    s += "," + csv_double(r.nmse_db);
    s += "," + csv_double(r.data_fidelity);
    s += "," + csv_double(r.ce_res_h);
    s += "," + csv_double(r.ce_res_f);
    if (has_red_residual) s += "," + csv_double(r.red_residual_norm);
    if (include_timing) s += "," + csv_double(r.seconds);
    s += "\n";
  }
  return s;
}

void SolverTrace::write_csv(const std::string& path, bool include_timing) const {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("trace: cannot open " + path);
  const std::string s = to_csv(include_timing);
  f.write(s.data(), static_cast<std::streamsize>(s.size()));
  if (!f) throw IoError("trace: write failed for " + path);
}

std::string AmpTrace::to_csv() const {
  std::string s = "iter,empirical_eta,se_eta,nmse_db\n";
  for (const auto& r : rows) {
    s += std::to_string(r.iter);
    s += "," + csv_double(r.empirical_eta);
    s += "," + csv_double(r.se_eta);
    s += "," + csv_double(r.nmse_db);
    s += "\n";
  }
  return s;
}

void AmpTrace::write_csv(const std::string& path) const {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("trace: cannot open " + path);
  const std::string s = to_csv();
  f.write(s.data(), static_cast<std::streamsize>(s.size()));
  if (!f) throw IoError("trace: write failed for " + path);
}

}  // namespace pnpmri
